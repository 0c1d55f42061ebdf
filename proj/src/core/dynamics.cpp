#include "dynamics.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "stats.hpp"

namespace creditdiv::dynamics {

void FirmParams::validate() const {
    if (!(sigma_base > 0.0)) fail(errc::invalid_argument, "FirmParams: sigma_base must be positive");
    if (!(v0 > 0.0)) fail(errc::invalid_argument, "FirmParams: v0 must be positive");
    if (!(debt > 0.0)) fail(errc::invalid_argument, "FirmParams: debt must be positive");
    if (!(horizon > 0.0)) fail(errc::invalid_argument, "FirmParams: horizon must be positive");
}

double FirmParams::log_leverage() const { return std::log(debt / v0); }

LoadingMatrix build_loadings(const corrmat::CorrelationMatrix& s, double sigma_base, LoadingMode mode) {
    if (!(sigma_base > 0.0)) fail(errc::invalid_argument, "build_loadings: sigma_base must be positive");
    const std::size_t n = s.dim();
    if (mode == LoadingMode::Direct) {
        SquareMatrix l(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) l.at(i, j) = sigma_base * s.entry(i, j);
        return LoadingMatrix{std::move(l), mode};
    }
    SquareMatrix scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled.at(i, j) = sigma_base * sigma_base * s.entry(i, j);
    return LoadingMatrix{cholesky_factor(scaled), mode};
}

double effective_variance(const LoadingMatrix& loadings, std::size_t firm_index) {
    const std::size_t n = loadings.firms();
    if (firm_index >= n) fail(errc::invalid_argument, "effective_variance: firm index out of range");
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double v = loadings.loadings.at(firm_index, j);
        s += v * v;
    }
    return s;
}

TerminalMoments terminal_moments(const FirmParams& firm, double log_variance_rate) {
    firm.validate();
    if (!(log_variance_rate >= 0.0))
        fail(errc::invalid_argument, "terminal_moments: log variance rate must be nonnegative");
    const double t = firm.horizon;
    const double mean = firm.v0 * std::exp(firm.mu * t);
    const double variance =
        firm.v0 * firm.v0 * std::exp(2.0 * firm.mu * t) * std::expm1(log_variance_rate * t);
    return TerminalMoments{mean, variance, std::log(firm.v0) + (firm.mu - 0.5 * log_variance_rate) * t,
                           log_variance_rate * t};
}

double default_probability(const FirmParams& firm, double log_variance_rate) {
    firm.validate();
    if (!(log_variance_rate > 0.0))
        fail(errc::degenerate_distribution, "default_probability: log variance rate must be positive");
    const double t = firm.horizon;
    const double z = (firm.log_leverage() - (firm.mu - 0.5 * log_variance_rate) * t) /
                     std::sqrt(log_variance_rate * t);
    return stats::normal_cdf(z);
}

DefaultProbPair default_prob_pair(const FirmParams& firm, const LoadingMatrix& loadings,
                                  std::size_t firm_index) {
    return DefaultProbPair{default_probability(firm, firm.sigma_base * firm.sigma_base),
                           default_probability(firm, effective_variance(loadings, firm_index))};
}

BrownianIncrements draw_increments(std::size_t factors, double t, Rng& rng) {
    if (!(t > 0.0)) fail(errc::invalid_argument, "draw_increments: t must be positive");
    BrownianIncrements w{std::vector<double>(factors)};
    const double scale = std::sqrt(t);
    for (auto& v : w.increments) v = scale * rng.normal();
    return w;
}

std::vector<double> simulate_terminal_values(std::span<const FirmParams> firms,
                                             const LoadingMatrix& loadings, std::size_t reps, Rng& rng) {
    const std::size_t n = firms.size();
    if (n == 0) fail(errc::invalid_argument, "simulate_terminal_values: no firms");
    if (loadings.firms() != n)
        fail(errc::invalid_argument, "simulate_terminal_values: loadings dimension does not match firms");
    if (reps == 0) fail(errc::invalid_argument, "simulate_terminal_values: reps must be positive");
    for (const auto& f : firms) f.validate();
    const double t = firms[0].horizon;

    std::vector<double> drift(n);
    for (std::size_t i = 0; i < n; ++i)
        drift[i] = (firms[i].mu - 0.5 * effective_variance(loadings, i)) * t;

    std::vector<double> out(reps * n);
    for (std::size_t r = 0; r < reps; ++r) {
        const BrownianIncrements w = draw_increments(n, t, rng);
        for (std::size_t i = 0; i < n; ++i) {
            double shock = 0.0;
            const double* row = loadings.loadings.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) shock += row[j] * w.increments[j];
            out[r * n + i] = firms[i].v0 * std::exp(drift[i] + shock);
        }
    }
    return out;
}

std::vector<McEstimate> mc_default_probability(std::span<const FirmParams> firms,
                                               const LoadingMatrix& loadings,
                                               std::span<const double> debts, std::size_t reps, Rng& rng) {
    if (reps < 100) fail(errc::invalid_argument, "mc_default_probability: reps must be at least 100");
    if (debts.size() != firms.size())
        fail(errc::invalid_argument, "mc_default_probability: debts size does not match firms");
    const std::vector<double> values = simulate_terminal_values(firms, loadings, reps, rng);
    const std::size_t n = firms.size();
    std::vector<McEstimate> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t defaults = 0;
        for (std::size_t r = 0; r < reps; ++r)
            if (values[r * n + i] <= debts[i]) ++defaults;
        const double p = static_cast<double>(defaults) / static_cast<double>(reps);
        out[i] = McEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(reps))};
    }
    return out;
}

} // namespace creditdiv::dynamics
