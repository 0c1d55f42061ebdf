#include "creditdiv.h"

#include <cstring>
#include <fstream>
#include <string>

#include "../core/corrmat.hpp"
#include "../core/divergence.hpp"
#include "../core/errors.hpp"
#include "../core/harness.hpp"
#include "../core/matrix.hpp"

namespace {

thread_local std::string g_last_error;

cd_status map_code(creditdiv::errc code) {
    using creditdiv::errc;
    switch (code) {
        case errc::invalid_argument: return CD_ERR_INVALID_ARGUMENT;
        case errc::not_positive_definite: return CD_ERR_NOT_POSITIVE_DEFINITE;
        case errc::band_infeasible: return CD_ERR_BAND_INFEASIBLE;
        case errc::degenerate_distribution: return CD_ERR_DEGENERATE;
        case errc::degenerate_sample: return CD_ERR_DEGENERATE;
        case errc::domain_error: return CD_ERR_DOMAIN;
        case errc::config_error: return CD_ERR_CONFIG;
        case errc::io_error: return CD_ERR_IO;
        case errc::numerical_error: return CD_ERR_NUMERICAL;
    }
    return CD_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
cd_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CD_OK;
    } catch (const creditdiv::error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CD_ERR_INVALID_ARGUMENT;
    }
}

} // namespace

struct cd_config {
    creditdiv::harness::ExperimentConfig cfg;
};

struct cd_matrix {
    creditdiv::corrmat::CorrelationMatrix m;
};

extern "C" {

const char* cd_version(void) { return "0.1.0"; }

const char* cd_status_name(cd_status status) {
    switch (status) {
        case CD_OK: return "ok";
        case CD_ERR_INVALID_ARGUMENT: return "invalid argument";
        case CD_ERR_NOT_POSITIVE_DEFINITE: return "not positive definite";
        case CD_ERR_BAND_INFEASIBLE: return "band infeasible";
        case CD_ERR_DEGENERATE: return "degenerate distribution or sample";
        case CD_ERR_DOMAIN: return "domain error";
        case CD_ERR_CONFIG: return "config error";
        case CD_ERR_IO: return "io error";
        case CD_ERR_NUMERICAL: return "numerical error";
    }
    return "unknown";
}

const char* cd_last_error(void) { return g_last_error.c_str(); }

cd_config* cd_config_create(void) { return new cd_config{}; }

void cd_config_destroy(cd_config* config) { delete config; }

cd_status cd_config_load_file(cd_config* config, const char* path) {
    if (!config || !path) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { config->cfg = creditdiv::harness::load_config_file(path); });
}

cd_status cd_config_set(cd_config* config, const char* key, const char* value) {
    if (!config || !key || !value) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { config->cfg.set(key, value); });
}

cd_status cd_config_get(const cd_config* config, const char* key, char* buf, size_t buflen) {
    if (!config || !key || !buf || buflen == 0) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const std::string v = config->cfg.get(key);
        std::strncpy(buf, v.c_str(), buflen - 1);
        buf[buflen - 1] = '\0';
    });
}

cd_status cd_config_apply_profile(cd_config* config, const char* profile) {
    if (!config || !profile) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { config->cfg.apply_profile(profile); });
}

cd_status cd_run_grid(const cd_config* config, const char* out_dir, int workers) {
    if (!config || !out_dir) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { creditdiv::harness::run_grid_to_dir(config->cfg, out_dir, workers); });
}

cd_status cd_default_band(const char* regime, double* rho_min, double* rho_max) {
    if (!regime || !rho_min || !rho_max) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto r = creditdiv::corrmat::parse_regime(regime);
        if (!r) creditdiv::fail(creditdiv::errc::invalid_argument,
                                "unknown regime '" + std::string(regime) + "' (expected high or low)");
        const auto band = *r == creditdiv::corrmat::Regime::High ? creditdiv::corrmat::NoiseBand::high()
                                                                 : creditdiv::corrmat::NoiseBand::low();
        *rho_min = band.rho_min;
        *rho_max = band.rho_max;
    });
}

cd_status cd_matrix_generate(int dim, double rho_min, double rho_max, uint64_t seed, cd_matrix** out) {
    if (!out) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        if (dim < 2)
            creditdiv::fail(creditdiv::errc::invalid_argument, "matrix dimension must be at least 2");
        const auto regime = rho_min >= 0.5 ? creditdiv::corrmat::Regime::High
                                           : creditdiv::corrmat::Regime::Low;
        const creditdiv::corrmat::NoiseBand band(rho_min, rho_max, regime);
        creditdiv::Rng rng(seed);
        *out = new cd_matrix{creditdiv::corrmat::generate_correlation_matrix(
            static_cast<std::size_t>(dim), band, rng)};
    });
}

void cd_matrix_destroy(cd_matrix* matrix) { delete matrix; }

int cd_matrix_dim(const cd_matrix* matrix) {
    return matrix ? static_cast<int>(matrix->m.dim()) : 0;
}

cd_status cd_matrix_entry(const cd_matrix* matrix, int i, int j, double* out) {
    if (!matrix || !out) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const int n = static_cast<int>(matrix->m.dim());
        if (i < 0 || j < 0 || i >= n || j >= n)
            creditdiv::fail(creditdiv::errc::invalid_argument, "matrix index out of range");
        *out = matrix->m.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    });
}

cd_status cd_matrix_min_eigenvalue(const cd_matrix* matrix, double* out) {
    if (!matrix || !out) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = creditdiv::min_eigenvalue(matrix->m.matrix()); });
}

cd_status cd_matrix_write_csv(const cd_matrix* matrix, const char* path) {
    if (!matrix || !path) {
        g_last_error = "null argument";
        return CD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) creditdiv::fail(creditdiv::errc::io_error,
                                "cannot open '" + std::string(path) + "' for writing");
        const std::string csv = creditdiv::corrmat::to_csv(matrix->m);
        f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
        if (!f) creditdiv::fail(creditdiv::errc::io_error, "short write to '" + std::string(path) + "'");
    });
}

cd_status cd_jeffreys_bernoulli(double p, double q, double* j, double* kl_fwd, double* kl_bwd) {
    return guarded([&] {
        const auto v = creditdiv::divergence::jeffreys_bernoulli(p, q);
        if (j) *j = v.j;
        if (kl_fwd) *kl_fwd = v.kl_forward;
        if (kl_bwd) *kl_bwd = v.kl_backward;
    });
}

cd_status cd_jeffreys_normal(double mu1, double var1, double mu2, double var2, double* j,
                             double* kl_fwd, double* kl_bwd) {
    return guarded([&] {
        const auto v = creditdiv::divergence::jeffreys_normal(mu1, var1, mu2, var2);
        if (j) *j = v.j;
        if (kl_fwd) *kl_fwd = v.kl_forward;
        if (kl_bwd) *kl_bwd = v.kl_backward;
    });
}

} // extern "C"
