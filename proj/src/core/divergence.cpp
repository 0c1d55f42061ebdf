#include "divergence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace creditdiv::divergence {

double clamp_probability(double p, ClampStats* stats) {
    if (p < kProbClamp) {
        if (stats) ++stats->events;
        return kProbClamp;
    }
    if (p > 1.0 - kProbClamp) {
        if (stats) ++stats->events;
        return 1.0 - kProbClamp;
    }
    return p;
}

double kl_bernoulli(double p, double q, ClampStats* stats) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        fail(errc::domain_error, "kl_bernoulli: probabilities must lie in [0,1]");
    if (p == q) return 0.0;
    if (p == 0.0 || p == 1.0 || q == 0.0 || q == 1.0)
        fail(errc::domain_error, "kl_bernoulli: boundary probability with p != q");
    p = clamp_probability(p, stats);
    q = clamp_probability(q, stats);
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

DivergenceValue jeffreys_bernoulli(double p, double q, ClampStats* stats) {
    const double fwd = kl_bernoulli(p, q, stats);
    const double bwd = kl_bernoulli(q, p, stats);
    return DivergenceValue{fwd + bwd, fwd, bwd};
}

DivergenceValue jeffreys_normal(double mu1, double var1, double mu2, double var2) {
    if (!(var1 > 0.0) || !(var2 > 0.0))
        fail(errc::degenerate_distribution, "jeffreys_normal: variances must be positive");
    const double d2 = (mu1 - mu2) * (mu1 - mu2);
    const double fwd = 0.5 * (std::log(var2 / var1) + (var1 + d2) / var2 - 1.0);
    const double bwd = 0.5 * (std::log(var1 / var2) + (var2 + d2) / var1 - 1.0);
    return DivergenceValue{fwd + bwd, fwd, bwd};
}

namespace {

constexpr double kOverflowGuard = 1e6;

using LogDensity = std::function<double(double)>;

// Integrands in u = ln x. The Jeffreys one is (f1 - f2) ln(f1/f2) x, i.e.
// (e^{a+u} - e^{b+u})(a - b) with a = ln f1(e^u), b = ln f2(e^u); the mass
// ones integrate each density alone, used to verify the sampler saw the
// distributions at all.
enum class Kind { Jeffreys, Mass1, Mass2 };

struct QuadCtx {
    const LogDensity& log_f1;
    const LogDensity& log_f2;
    Kind kind = Kind::Jeffreys;
    int evals = 0;
};

double integrand(QuadCtx& ctx, double u) {
    const double x = std::exp(u);
    const double a = ctx.log_f1(x);
    const double b = ctx.log_f2(x);
    if (std::isnan(a) || std::isnan(b) || a == std::numeric_limits<double>::infinity() ||
        b == std::numeric_limits<double>::infinity())
        fail(errc::domain_error, "jeffreys_quadrature: log-densities must be finite or -inf");
    if (ctx.kind == Kind::Mass1) return std::exp(a + u);
    if (ctx.kind == Kind::Mass2) return std::exp(b + u);
    const double fa = std::exp(a + u);
    const double fb = std::exp(b + u);
    if (fa == 0.0 && fb == 0.0) return 0.0;
    const double diff = a - b;
    if (std::isinf(diff)) {
        // One side underflowed the caller's density representation while the
        // other still carries mass there; the true log ratio is unknown.
        if (std::max(fa, fb) <= 1e-280) return 0.0;
        fail(errc::numerical_error,
             "jeffreys_quadrature: density underflow under the other density's mass; "
             "use the log-density form");
    }
    const double g = (fa - fb) * diff;
    return std::isfinite(g) ? g : 0.0;
}

double adaptive_simpson(QuadCtx& ctx, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    if (ctx.evals > 4'000'000)
        fail(errc::numerical_error, "jeffreys_quadrature: evaluation budget exhausted");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = integrand(ctx, lm);
    const double frm = integrand(ctx, rm);
    ctx.evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double segment(QuadCtx& ctx, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = integrand(ctx, a);
    const double fm = integrand(ctx, m);
    const double fb = integrand(ctx, b);
    ctx.evals += 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(ctx, a, b, fa, fm, fb, whole, tol, 44);
}

double integrate(QuadCtx& ctx, double abs_tol, bool guard) {
    // Core interval in u split into fixed panels so narrow features are
    // seen, then geometric tail segments.
    constexpr double kCore = 16.0;
    constexpr double kMaxU = 700.0;
    constexpr int kPanels = 64;
    const double tail_tol = 0.01 * abs_tol;

    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double a = -kCore + 2.0 * kCore * i / kPanels;
        const double b = -kCore + 2.0 * kCore * (i + 1) / kPanels;
        total += segment(ctx, a, b, 0.5 * abs_tol / kPanels);
        if (guard && total > kOverflowGuard)
            fail(errc::numerical_error, "jeffreys_quadrature: divergence exceeds overflow guard 1e6");
    }
    for (int side = 0; side < 2; ++side) {
        double edge = kCore;
        double step = 8.0;
        while (edge < kMaxU) {
            const double next = std::min(edge + step, kMaxU);
            const double part = side == 0 ? segment(ctx, edge, next, 0.02 * abs_tol)
                                          : segment(ctx, -next, -edge, 0.02 * abs_tol);
            total += part;
            edge = next;
            step *= 2.0;
            if (guard && total > kOverflowGuard)
                fail(errc::numerical_error, "jeffreys_quadrature: divergence exceeds overflow guard 1e6");
            if (std::fabs(part) < tail_tol) break;
        }
    }
    return total;
}

double quadrature_impl(const LogDensity& log_f1, const LogDensity& log_f2, double abs_tol) {
    if (!(abs_tol > 0.0)) fail(errc::invalid_argument, "jeffreys_quadrature: tolerance must be positive");
    QuadCtx ctx{log_f1, log_f2};
    const double total = integrate(ctx, abs_tol, true);

    for (Kind kind : {Kind::Mass1, Kind::Mass2}) {
        QuadCtx mass_ctx{log_f1, log_f2, kind};
        const double mass = integrate(mass_ctx, 1e-6, false);
        if (std::fabs(mass - 1.0) > 0.02)
            fail(errc::numerical_error,
                 "jeffreys_quadrature: non-convergent integral, density mass " + std::to_string(mass) +
                     " not captured on (0, inf)");
    }
    return total;
}

} // namespace

double jeffreys_quadrature(const std::function<double(double)>& f1,
                           const std::function<double(double)>& f2, double abs_tol) {
    auto check_log = [](const std::function<double(double)>& f, double x) {
        const double v = f(x);
        if (v < 0.0 || !(v == v))
            fail(errc::domain_error, "jeffreys_quadrature: densities must be finite and nonnegative");
        return std::log(v);
    };
    LogDensity lf1 = [&](double x) { return check_log(f1, x); };
    LogDensity lf2 = [&](double x) { return check_log(f2, x); };
    return quadrature_impl(lf1, lf2, abs_tol);
}

double jeffreys_quadrature_log(const std::function<double(double)>& log_f1,
                               const std::function<double(double)>& log_f2, double abs_tol) {
    return quadrature_impl(log_f1, log_f2, abs_tol);
}

} // namespace creditdiv::divergence
