#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corrmat.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace creditdiv::dynamics {

struct FirmParams {
    double mu;         // drift per unit time
    double sigma_base; // stand-alone volatility per sqrt(time)
    double v0;         // initial asset value
    double debt;       // face value of debt at the horizon
    double horizon;    // T

    void validate() const;
    double log_leverage() const; // ln(debt / v0)
};

enum class LoadingMode { Direct, Cholesky };

// Firm-by-factor volatility loadings sigma_ij (N x m, per sqrt(time)).
struct LoadingMatrix {
    SquareMatrix loadings; // square because N = m throughout
    LoadingMode mode;

    std::size_t firms() const { return loadings.dim(); }
    std::size_t factors() const { return loadings.dim(); }
};

struct TerminalMoments {
    double mean;
    double variance;
    double log_mean;     // mean of ln V_T
    double log_variance; // variance of ln V_T
};

struct DefaultProbPair {
    double p_single;
    double p_multi;
};

struct BrownianIncrements {
    std::vector<double> increments; // sqrt(t) * Z, one entry per factor
};

struct McEstimate {
    double estimate;
    double std_error;
};

// Direct: sigma_ij = sigma_base * S_ij. Cholesky: rows of the Cholesky
// factor of sigma_base^2 * S, whose row norms equal sigma_base exactly.
LoadingMatrix build_loadings(const corrmat::CorrelationMatrix& s, double sigma_base, LoadingMode mode);

// sum_j sigma_ij^2, per unit time.
double effective_variance(const LoadingMatrix& loadings, std::size_t firm_index);

TerminalMoments terminal_moments(const FirmParams& firm, double log_variance_rate);

// P(V_T <= debt) with ln V_T ~ N(ln v0 + (mu - rate/2) T, rate T).
double default_probability(const FirmParams& firm, double log_variance_rate);

DefaultProbPair default_prob_pair(const FirmParams& firm, const LoadingMatrix& loadings,
                                  std::size_t firm_index);

BrownianIncrements draw_increments(std::size_t factors, double t, Rng& rng);

// Exact one-shot terminal draws, reps x N row-major; factor shocks shared
// across firms within a draw.
std::vector<double> simulate_terminal_values(std::span<const FirmParams> firms,
                                             const LoadingMatrix& loadings, std::size_t reps, Rng& rng);

// Indicator-mean default estimate with binomial standard error, one entry
// per firm. Debts override the per-firm debt field.
std::vector<McEstimate> mc_default_probability(std::span<const FirmParams> firms,
                                               const LoadingMatrix& loadings,
                                               std::span<const double> debts, std::size_t reps, Rng& rng);

} // namespace creditdiv::dynamics
