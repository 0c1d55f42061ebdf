#pragma once

#include <cstdint>
#include <functional>

namespace creditdiv::divergence {

struct DivergenceValue {
    double j;           // Jeffreys divergence, kl_forward + kl_backward
    double kl_forward;  // I_{1,2}
    double kl_backward; // I_{2,1}
};

// Counts probabilities pulled onto [1e-15, 1-1e-15] before taking logs.
struct ClampStats {
    std::uint64_t events = 0;
};

inline constexpr double kProbClamp = 1e-15;

// Pulls a probability in (0,1) onto the clamp interval, counting events.
double clamp_probability(double p, ClampStats* stats);

// Two-point Kullback-Leibler divergence p*ln(p/q) + (1-p)*ln((1-p)/(1-q)).
// p or q exactly 0 or 1 is a domain error unless p == q (then 0).
double kl_bernoulli(double p, double q, ClampStats* stats = nullptr);

DivergenceValue jeffreys_bernoulli(double p, double q, ClampStats* stats = nullptr);

// Closed-form Jeffreys divergence between N(mu1,var1) and N(mu2,var2);
// invariant under the exp map, so it equals the divergence of the
// corresponding log-normal densities on (0, inf).
DivergenceValue jeffreys_normal(double mu1, double var1, double mu2, double var2);

// Adaptive quadrature of the Jeffreys integrand over (0, inf) via the
// substitution x = e^u. Independent oracle for the closed forms; errors out
// when the accumulated divergence exceeds the 1e6 overflow guard or when a
// density's mass cannot be captured by the sampler. The log form takes
// ln f_i(x) callables and stays accurate when the densities themselves
// underflow double precision.
double jeffreys_quadrature(const std::function<double(double)>& f1,
                           const std::function<double(double)>& f2, double abs_tol = 1e-8);

double jeffreys_quadrature_log(const std::function<double(double)>& log_f1,
                               const std::function<double(double)>& log_f2, double abs_tol = 1e-8);

} // namespace creditdiv::divergence
