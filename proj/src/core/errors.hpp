#pragma once

#include <stdexcept>
#include <string>

namespace creditdiv {

enum class errc {
    invalid_argument,
    not_positive_definite,
    band_infeasible,
    degenerate_distribution,
    degenerate_sample,
    domain_error,
    config_error,
    io_error,
    numerical_error,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace creditdiv
