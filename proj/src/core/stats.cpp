#include "stats.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace creditdiv::stats {

namespace {

// Cody's rational Chebyshev coefficients for erf/erfc (SPECFUN CALERF).
constexpr double kErfA[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                             3.77485237685302021e+02, 3.20937758913846947e+03,
                             1.85777706184603153e-01};
constexpr double kErfB[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                             1.28261652607737228e+03, 2.84423683343917062e+03};
constexpr double kErfC[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                             6.61191906371416295e+01, 2.98635138197400131e+02,
                             8.81952221241769090e+02, 1.71204761263407058e+03,
                             2.05107837782607147e+03, 1.23033935479799725e+03,
                             2.15311535474403846e-08};
constexpr double kErfD[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                             5.37181101862009858e+02, 1.62138957456669019e+03,
                             3.29079923573345963e+03, 4.36261909014324716e+03,
                             3.43936767414372164e+03, 1.23033935480374942e+03};
constexpr double kErfP[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                             1.25781726111229246e-01, 1.60837851487422766e-02,
                             6.58749161529837803e-04, 1.63153871373020978e-02};
constexpr double kErfQ[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                             5.27905102951428412e-01, 6.05183413124413191e-02,
                             2.33520497626869185e-03};
constexpr double kInvSqrtPi = 5.6418958354775628695e-01;

double erf_small(double x) {
    const double z = x * x;
    double xnum = kErfA[4] * z;
    double xden = z;
    for (int i = 0; i < 3; ++i) {
        xnum = (xnum + kErfA[i]) * z;
        xden = (xden + kErfB[i]) * z;
    }
    return x * (xnum + kErfA[3]) / (xden + kErfB[3]);
}

double erfc_mid(double y) {
    double xnum = kErfC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
        xnum = (xnum + kErfC[i]) * y;
        xden = (xden + kErfD[i]) * y;
    }
    const double result = (xnum + kErfC[7]) / (xden + kErfD[7]);
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

double erfc_large(double y) {
    if (y >= 26.543) return 0.0;
    const double z = 1.0 / (y * y);
    double xnum = kErfP[5] * z;
    double xden = z;
    for (int i = 0; i < 4; ++i) {
        xnum = (xnum + kErfP[i]) * z;
        xden = (xden + kErfQ[i]) * z;
    }
    double result = z * (xnum + kErfP[4]) / (xden + kErfQ[4]);
    result = (kInvSqrtPi - result) / y;
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

} // namespace

double erfc_cody(double x) {
    const double y = std::fabs(x);
    if (y <= 0.46875) return 1.0 - erf_small(x);
    const double r = y <= 4.0 ? erfc_mid(y) : erfc_large(y);
    return x < 0.0 ? 2.0 - r : r;
}

double normal_cdf(double x) { return 0.5 * erfc_cody(-x * 7.0710678118654752440e-01); }

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    fail(errc::numerical_error, "regularized_incomplete_beta: continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        fail(errc::invalid_argument, "regularized_incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        fail(errc::invalid_argument, "regularized_incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
    return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double student_t_cdf(double x, double dof) {
    if (!(dof > 0.0)) fail(errc::invalid_argument, "student_t_cdf: dof must be positive");
    if (x == 0.0) return 0.5;
    const double ib = regularized_incomplete_beta(dof / (x * x + dof), 0.5 * dof, 0.5);
    return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

SampleSummary summarize(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 2) fail(errc::invalid_argument, "summarize: need at least 2 observations");
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : sample) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return SampleSummary{n, mean, sd, sd / std::sqrt(static_cast<double>(n))};
}

WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) fail(errc::invalid_argument, "welch_test: each sample needs n >= 2");
    const SampleSummary sa = summarize(a);
    const SampleSummary sb = summarize(b);
    const double ga = sa.sd * sa.sd / static_cast<double>(sa.n);
    const double gb = sb.sd * sb.sd / static_cast<double>(sb.n);
    if (ga + gb == 0.0) {
        if (sa.mean == sb.mean)
            return WelchResult{0.0, static_cast<double>(sa.n + sb.n - 2), 1.0};
        fail(errc::degenerate_sample, "welch_test: both samples have zero variance and unequal means");
    }
    const double t = (sa.mean - sb.mean) / std::sqrt(ga + gb);
    const double dof = (ga + gb) * (ga + gb) /
                       (ga * ga / static_cast<double>(sa.n - 1) + gb * gb / static_cast<double>(sb.n - 1));
    const double p = 2.0 * student_t_cdf(-std::fabs(t), dof);
    return WelchResult{t, dof, p};
}

} // namespace creditdiv::stats
