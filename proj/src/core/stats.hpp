#pragma once

#include <cstddef>
#include <span>

namespace creditdiv::stats {

struct WelchResult {
    double t_stat;
    double dof;
    double p_value; // two-sided
};

struct SampleSummary {
    std::size_t n;
    double mean;
    double sd; // sample standard deviation, n-1 denominator
    double se; // sd / sqrt(n)
};

// Complementary error function, Cody-style rational approximations,
// absolute error well below 1e-12 across the double range.
double erfc_cody(double x);

// Standard normal CDF.
double normal_cdf(double x);

// Regularized incomplete beta I_x(a, b) via continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

// Student-t CDF for real dof > 0.
double student_t_cdf(double x, double dof);

// Welch's unequal-variance two-sample t-test, two-sided p-value.
// Both samples constant and equal-mean gives t=0, p=1 by convention;
// both constant with different means is a degenerate-sample error.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

SampleSummary summarize(std::span<const double> sample);

} // namespace creditdiv::stats
