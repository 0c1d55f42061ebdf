#include "corrmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"

namespace creditdiv::corrmat {

const char* regime_name(Regime r) { return r == Regime::High ? "high" : "low"; }

std::optional<Regime> parse_regime(const std::string& s) {
    if (s == "high") return Regime::High;
    if (s == "low") return Regime::Low;
    return std::nullopt;
}

NoiseBand::NoiseBand(double lo, double hi, Regime r) : rho_min(lo), rho_max(hi), regime(r) {
    if (!(lo > 0.0 && lo < 1.0)) fail(errc::invalid_argument, "NoiseBand: rho_min must lie in (0,1)");
    if (!(hi > 0.0 && hi <= 1.0)) fail(errc::invalid_argument, "NoiseBand: rho_max must lie in (0,1]");
    if (lo > hi) fail(errc::invalid_argument, "NoiseBand: rho_min must not exceed rho_max");
}

SignPattern SignPattern::all_positive(std::size_t dim) { return SignPattern{std::vector<int>(dim, 1)}; }

SignPattern SignPattern::random(std::size_t dim, Rng& rng) {
    SignPattern p{std::vector<int>(dim)};
    for (auto& s : p.signs) s = rng.next_bool() ? 1 : -1;
    return p;
}

CorrelationMatrix::CorrelationMatrix(SquareMatrix m) : m_(std::move(m)) {
    const std::size_t n = m_.dim();
    if (n == 0) fail(errc::invalid_argument, "CorrelationMatrix: empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (m_.at(i, i) != 1.0) fail(errc::invalid_argument, "CorrelationMatrix: diagonal must equal 1");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m_.at(i, j) != m_.at(j, i)) fail(errc::invalid_argument, "CorrelationMatrix: not symmetric");
            if (std::fabs(m_.at(i, j)) > 1.0)
                fail(errc::invalid_argument, "CorrelationMatrix: off-diagonal magnitude exceeds 1");
        }
    }
}

CorrelationMatrix generate_base_matrix(std::size_t dim, const NoiseBand& band) {
    if (dim < 2) fail(errc::invalid_argument, "generate_base_matrix: dim must be at least 2");
    const double mid = band.midpoint();
    SquareMatrix m(dim, mid);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return CorrelationMatrix(std::move(m));
}

namespace {

CorrelationMatrix noisy(const CorrelationMatrix& base, const NoiseBand& band, Rng& rng, double epsilon,
                        std::size_t noise_dim) {
    const std::size_t n = base.dim();
    if (!(epsilon >= 0.0)) fail(errc::invalid_argument, "apply_banded_noise: epsilon must be nonnegative");
    if (noise_dim == 0) fail(errc::invalid_argument, "apply_banded_noise: noise_dim must be positive");
    if (epsilon == 0.0) return base;

    std::vector<double> q(n * noise_dim);
    for (std::size_t i = 0; i < n; ++i) rng.unit_vector(noise_dim, q.data() + i * noise_dim);

    constexpr double slack = 1e-9;
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            const double* qi = q.data() + i * noise_dim;
            const double* qj = q.data() + j * noise_dim;
            for (std::size_t k = 0; k < noise_dim; ++k) dot += qi[k] * qj[k];
            double v = base.entry(i, j) + epsilon * dot;
            if (v > band.rho_max + slack || v < band.rho_min - slack)
                fail(errc::band_infeasible,
                     "apply_banded_noise: entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                         std::to_string(v) + " cannot stay in band [" + std::to_string(band.rho_min) + "," +
                         std::to_string(band.rho_max) + "]");
            v = std::clamp(v, band.rho_min, band.rho_max);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(m));
}

} // namespace

CorrelationMatrix apply_banded_noise(const CorrelationMatrix& base, const NoiseBand& band, Rng& rng,
                                     double epsilon, std::size_t noise_dim) {
    return noisy(base, band, rng, epsilon, noise_dim);
}

CorrelationMatrix apply_banded_noise(const CorrelationMatrix& base, const NoiseBand& band, Rng& rng) {
    const double lambda = min_eigenvalue(base.matrix());
    if (!(lambda > 0.0)) fail(errc::not_positive_definite, "apply_banded_noise: base is not positive definite");
    double edge = std::numeric_limits<double>::infinity();
    const std::size_t n = base.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = std::fabs(base.entry(i, j));
            edge = std::min(edge, std::min(a - band.rho_min, band.rho_max - a));
        }
    if (edge < 0.0) fail(errc::band_infeasible, "apply_banded_noise: base entries already outside band");
    return noisy(base, band, rng, std::min(edge, 0.95 * lambda), 3);
}

CorrelationMatrix apply_sign_pattern(const CorrelationMatrix& s, const SignPattern& pattern) {
    const std::size_t n = s.dim();
    if (pattern.signs.size() != n)
        fail(errc::invalid_argument, "apply_sign_pattern: pattern length does not match matrix dimension");
    for (int v : pattern.signs)
        if (v != 1 && v != -1) fail(errc::invalid_argument, "apply_sign_pattern: signs must be +1 or -1");
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = static_cast<double>(pattern.signs[i] * pattern.signs[j]) * s.entry(i, j);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(m));
}

CorrelationMatrix generate_correlation_matrix(std::size_t dim, const NoiseBand& band, Rng& rng,
                                              std::size_t noise_dim) {
    // Single-pass composition of generate_base_matrix -> apply_banded_noise
    // -> apply_sign_pattern with the same draw order and arithmetic, one
    // matrix allocation instead of three.
    if (dim < 2) fail(errc::invalid_argument, "generate_base_matrix: dim must be at least 2");
    if (noise_dim == 0) fail(errc::invalid_argument, "apply_banded_noise: noise_dim must be positive");
    const double mid = band.midpoint();
    // Base spectrum is known in closed form: lambda_min = 1 - midpoint.
    const double epsilon = std::min(band.half_width(), 0.95 * (1.0 - mid));

    std::vector<double> q;
    if (epsilon > 0.0) {
        q.resize(dim * noise_dim);
        for (std::size_t i = 0; i < dim; ++i) rng.unit_vector(noise_dim, q.data() + i * noise_dim);
    }
    const SignPattern pattern = SignPattern::random(dim, rng);

    SquareMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < dim; ++j) {
            double v = mid;
            if (epsilon > 0.0) {
                double dot = 0.0;
                const double* qi = q.data() + i * noise_dim;
                const double* qj = q.data() + j * noise_dim;
                for (std::size_t k = 0; k < noise_dim; ++k) dot += qi[k] * qj[k];
                v = std::clamp(mid + epsilon * dot, band.rho_min, band.rho_max);
            }
            v *= static_cast<double>(pattern.signs[i] * pattern.signs[j]);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(m));
}

std::string to_csv(const CorrelationMatrix& m) {
    std::string out;
    const std::size_t n = m.dim();
    char buf[40];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m.entry(i, j));
            out += buf;
            out += (j + 1 < n) ? ',' : '\n';
        }
    }
    return out;
}

} // namespace creditdiv::corrmat
