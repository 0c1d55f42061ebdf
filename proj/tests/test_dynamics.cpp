#include "doctest.h"

#include <cmath>
#include <vector>

#include "corrmat.hpp"
#include "divergence.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "stats.hpp"

using namespace creditdiv;
using namespace creditdiv::dynamics;

namespace {

corrmat::CorrelationMatrix constant_matrix(std::size_t n, double rho) {
    SquareMatrix m(n, rho);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return corrmat::CorrelationMatrix(std::move(m));
}

corrmat::CorrelationMatrix identity_corr(std::size_t n) {
    return corrmat::CorrelationMatrix(SquareMatrix::identity(n));
}

} // namespace

TEST_CASE("loadings from the identity are diagonal in both modes") {
    for (auto mode : {LoadingMode::Direct, LoadingMode::Cholesky}) {
        const auto l = build_loadings(identity_corr(4), 0.3, mode);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(l.loadings.at(i, j) == doctest::Approx(i == j ? 0.3 : 0.0).epsilon(1e-15));
    }
}

TEST_CASE("cholesky loadings 2x2 closed form") {
    const auto l = build_loadings(constant_matrix(2, 0.5), 0.2, LoadingMode::Cholesky);
    CHECK(l.loadings.at(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(l.loadings.at(0, 1) == 0.0);
    CHECK(l.loadings.at(1, 0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(l.loadings.at(1, 1) == doctest::Approx(0.2 * std::sqrt(0.75)).epsilon(1e-14));
}

TEST_CASE("direct loadings inflate the row sum of squares") {
    const auto l = build_loadings(constant_matrix(2, 0.9), 0.2, LoadingMode::Direct);
    CHECK(effective_variance(l, 0) == doctest::Approx(0.04 * 1.81).epsilon(1e-14));
    CHECK(effective_variance(l, 1) == doctest::Approx(0.0724).epsilon(1e-14));
}

TEST_CASE("cholesky mode on a non-PD matrix propagates the error") {
    CHECK_THROWS_AS((void)build_loadings(constant_matrix(3, 1.0), 0.2, LoadingMode::Cholesky), error);
}

TEST_CASE("effective_variance identities") {
    CHECK(effective_variance(build_loadings(identity_corr(5), 0.4, LoadingMode::Direct), 2) ==
          doctest::Approx(0.16).epsilon(1e-14));

    // Cholesky rows always recover sigma_base^2.
    Rng rng(13);
    for (auto band : {corrmat::NoiseBand::low(), corrmat::NoiseBand::high()}) {
        const auto s = corrmat::generate_correlation_matrix(12, band, rng);
        const auto l = build_loadings(s, 0.37, LoadingMode::Cholesky);
        for (std::size_t i = 0; i < 12; ++i)
            CHECK(effective_variance(l, i) == doctest::Approx(0.37 * 0.37).epsilon(1e-12));
    }

    // All off-diagonals near 0.9 at dim 10: sigma^2 (1 + 9 * 0.81).
    const auto l9 = build_loadings(constant_matrix(10, 0.9), 0.2, LoadingMode::Direct);
    double direct_sum = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double v = 0.2 * (j == 3 ? 1.0 : 0.9);
        direct_sum += v * v;
    }
    CHECK(effective_variance(l9, 3) == doctest::Approx(direct_sum).epsilon(1e-14));
    CHECK(effective_variance(l9, 3) == doctest::Approx(0.04 * (1.0 + 9.0 * 0.81)).epsilon(1e-12));

    CHECK_THROWS_AS((void)effective_variance(l9, 10), error);
}

TEST_CASE("direct-mode variance never falls below sigma_base^2") {
    Rng rng(31);
    const auto s = corrmat::generate_correlation_matrix(8, corrmat::NoiseBand::low(), rng);
    const auto l = build_loadings(s, 0.25, LoadingMode::Direct);
    for (std::size_t i = 0; i < 8; ++i) CHECK(effective_variance(l, i) > 0.25 * 0.25);
}

TEST_CASE("terminal moments") {
    const FirmParams zero_drift{0.0, 0.2, 1.0, 0.5, 1.0};
    CHECK(terminal_moments(zero_drift, 0.04).mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(terminal_moments(zero_drift, 0.0).variance == 0.0);

    const FirmParams f{0.05, 0.2, 100.0, 60.0, 2.0};
    const auto m = terminal_moments(f, 0.04);
    CHECK(m.mean == doctest::Approx(100.0 * std::exp(0.1)).epsilon(1e-14));
    CHECK(m.mean == doctest::Approx(110.51709180756477).epsilon(1e-12));
    CHECK(m.log_variance == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(m.variance ==
          doctest::Approx(100.0 * 100.0 * std::exp(0.2) * (std::exp(0.08) - 1.0)).epsilon(1e-12));
}

TEST_CASE("default probability formula and edges") {
    // ln(D/v0) at the mean of ln V_T gives exactly one half.
    const double rate = 0.09;
    const FirmParams at_mean{0.05, 0.3, 1.0, std::exp((0.05 - 0.5 * rate) * 1.0), 1.0};
    CHECK(default_probability(at_mean, rate) == doctest::Approx(0.5).epsilon(1e-14));

    const FirmParams tiny_debt{0.05, 0.3, 1.0, 1e-12, 1.0};
    CHECK(default_probability(tiny_debt, rate) < 1e-100);

    const FirmParams f{0.0, 0.2, 1.0, std::exp(0.1), 1.0};
    CHECK(default_probability(f, 0.04) ==
          doctest::Approx(oracles::normal_cdf_quadrature(0.6)).epsilon(1e-9));

    CHECK_THROWS_AS((void)default_probability(f, 0.0), error);
    CHECK_THROWS_AS((void)default_probability(f, -0.1), error);
}

TEST_CASE("default probability is monotone in leverage and (right of the mean) in rate") {
    double prev = 0.0;
    for (double lev = -1.0; lev <= 2.01; lev += 0.1) {
        const FirmParams f{0.05, 0.3, 1.0, std::exp(lev), 1.0};
        const double p = default_probability(f, 0.09);
        CHECK(p > prev);
        prev = p;
    }
    // Increasing in rate once rate >= 2 (ln(D/v0) - mu T) / T; always when
    // the debt sits at or below the drifted mean.
    double prev_rate_p = 0.0;
    for (double rate = 1.05; rate <= 2.0; rate += 0.05) {
        const FirmParams f{0.0, 0.3, 1.0, std::exp(0.5), 1.0}; // threshold 2*0.5 = 1
        const double p = default_probability(f, rate);
        CHECK(p > prev_rate_p);
        prev_rate_p = p;
    }
    prev_rate_p = 0.0;
    for (double rate = 0.05; rate <= 1.0; rate += 0.05) {
        const FirmParams f{0.05, 0.3, 1.0, 1.0, 1.0}; // ln(D/v0) = 0 < mu T
        const double p = default_probability(f, rate);
        CHECK(p > prev_rate_p);
        prev_rate_p = p;
    }
}

TEST_CASE("zero loadings give deterministic terminal values") {
    const std::vector<FirmParams> firms(3, FirmParams{0.07, 0.2, 2.0, 1.0, 1.5});
    LoadingMatrix zero{SquareMatrix(3), LoadingMode::Direct};
    Rng rng(55);
    const auto values = simulate_terminal_values(firms, zero, 10, rng);
    const double expect = 2.0 * std::exp(0.07 * 1.5);
    for (double v : values) CHECK(v == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("simulated mean matches the analytic mean within 3 standard errors") {
    const std::size_t reps = 200000;
    const std::vector<FirmParams> firms(2, FirmParams{0.05, 0.3, 1.0, 1.0, 1.0});
    const auto l = build_loadings(constant_matrix(2, 0.5), 0.3, LoadingMode::Direct);
    Rng rng(4242);
    const auto values = simulate_terminal_values(firms, l, reps, rng);
    for (std::size_t i = 0; i < 2; ++i) {
        const double rate = effective_variance(l, i);
        const auto m = terminal_moments(firms[i], rate);
        double mean = 0.0;
        for (std::size_t r = 0; r < reps; ++r) mean += values[r * 2 + i];
        mean /= static_cast<double>(reps);
        const double se = std::sqrt(m.variance / static_cast<double>(reps));
        CHECK(std::fabs(mean - m.mean) <= 3.0 * se);
    }
}

TEST_CASE("empirical default frequency matches the analytic probability") {
    const std::size_t reps = 200000;
    const double lev = 0.2;
    const std::vector<FirmParams> firms(2, FirmParams{0.05, 0.3, 1.0, std::exp(lev), 1.0});
    const auto l = build_loadings(constant_matrix(2, 0.7), 0.3, LoadingMode::Direct);
    Rng rng(777);
    const auto values = simulate_terminal_values(firms, l, reps, rng);
    for (std::size_t i = 0; i < 2; ++i) {
        const double p = default_probability(firms[i], effective_variance(l, i));
        std::size_t hits = 0;
        for (std::size_t r = 0; r < reps; ++r)
            if (values[r * 2 + i] <= firms[i].debt) ++hits;
        const double freq = static_cast<double>(hits) / static_cast<double>(reps);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
        CHECK(std::fabs(freq - p) <= 3.0 * se);
    }
}

TEST_CASE("mc_default_probability edge cases and analytic cross-checks") {
    // Zero-volatility firm that cannot default.
    {
        const std::vector<FirmParams> firms(1, FirmParams{0.05, 0.2, 1.0, 1.0, 1.0});
        LoadingMatrix zero{SquareMatrix(1), LoadingMode::Direct};
        Rng rng(1);
        const std::vector<double> debts{1.0}; // below v0 * e^{mu T}
        const auto est = mc_default_probability(firms, zero, debts, 500, rng);
        CHECK(est[0].estimate == 0.0);
        CHECK(est[0].std_error == 0.0);
    }
    // Identity market reproduces the single-factor probability.
    {
        const double lev = 0.1;
        const std::vector<FirmParams> firms(3, FirmParams{0.05, 0.25, 1.0, std::exp(lev), 1.0});
        const auto l = build_loadings(identity_corr(3), 0.25, LoadingMode::Direct);
        Rng rng(90);
        const std::vector<double> debts(3, std::exp(lev));
        const auto est = mc_default_probability(firms, l, debts, 60000, rng);
        const double p = default_probability(firms[0], 0.25 * 0.25);
        for (const auto& e : est) CHECK(std::fabs(e.estimate - p) <= 3.0 * e.std_error);
    }
    // Two-firm correlated market reproduces the multi-factor probability.
    {
        const double lev = 0.3;
        const std::vector<FirmParams> firms(2, FirmParams{0.05, 0.25, 1.0, std::exp(lev), 1.0});
        const auto l = build_loadings(constant_matrix(2, 0.9), 0.25, LoadingMode::Direct);
        Rng rng(91);
        const std::vector<double> debts(2, std::exp(lev));
        const auto est = mc_default_probability(firms, l, debts, 60000, rng);
        for (std::size_t i = 0; i < 2; ++i) {
            const double p = default_probability(firms[i], effective_variance(l, i));
            CHECK(std::fabs(est[i].estimate - p) <= 3.0 * est[i].std_error);
        }
    }
    // Guards.
    {
        const std::vector<FirmParams> firms(1, FirmParams{0.0, 0.2, 1.0, 1.0, 1.0});
        LoadingMatrix zero{SquareMatrix(1), LoadingMode::Direct};
        Rng rng(2);
        const std::vector<double> debts{1.0};
        CHECK_THROWS_AS((void)mc_default_probability(firms, zero, debts, 99, rng), error);
        CHECK_THROWS_AS((void)simulate_terminal_values(firms, zero, 0, rng), error);
    }
}

TEST_CASE("cholesky mode is the built-in null case") {
    Rng rng(101);
    for (auto band : {corrmat::NoiseBand::low(), corrmat::NoiseBand::high()}) {
        const auto s = corrmat::generate_correlation_matrix(10, band, rng);
        const auto l = build_loadings(s, 0.3, LoadingMode::Cholesky);
        const FirmParams f{0.05, 0.3, 1.0, std::exp(0.5), 1.0};
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(effective_variance(l, i) == doctest::Approx(0.09).epsilon(1e-12));
            const auto pair = default_prob_pair(f, l, i);
            CHECK(std::fabs(pair.p_single - pair.p_multi) <= 1e-12);
            CHECK(divergence::jeffreys_bernoulli(pair.p_single, pair.p_multi).j <= 1e-12);
        }
    }
}

TEST_CASE("log-value variance grows linearly in the horizon") {
    // 1/2-self-similarity: Var[ln V_T] = rate * T; fitted slope within 5%.
    const auto l = build_loadings(constant_matrix(2, 0.5), 0.3, LoadingMode::Direct);
    const double rate = effective_variance(l, 0);
    const std::size_t reps = 100000;
    std::vector<double> ts{0.25, 1.0, 4.0};
    std::vector<double> vars;
    Rng rng(606);
    for (double t : ts) {
        const std::vector<FirmParams> firms(2, FirmParams{0.05, 0.3, 1.0, 1.0, t});
        const auto values = simulate_terminal_values(firms, l, reps, rng);
        std::vector<double> logs(reps);
        for (std::size_t r = 0; r < reps; ++r) logs[r] = std::log(values[r * 2]);
        const auto s = stats::summarize(logs);
        vars.push_back(s.sd * s.sd);
    }
    // Least-squares slope of variance against t.
    double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sv += vars[i];
        stt += ts[i] * ts[i];
        stv += ts[i] * vars[i];
    }
    const double npts = static_cast<double>(ts.size());
    const double slope = (npts * stv - st * sv) / (npts * stt - st * st);
    CHECK(std::fabs(slope - rate) <= 0.05 * rate);
}

TEST_CASE("simulated variance matches the analytic variance at N=10") {
    const std::size_t reps = 100000;
    Rng mrng(17);
    const auto s = corrmat::generate_correlation_matrix(10, corrmat::NoiseBand::low(), mrng);
    const auto l = build_loadings(s, 0.25, LoadingMode::Direct);
    const std::vector<FirmParams> firms(10, FirmParams{0.05, 0.25, 1.0, 1.0, 1.0});
    Rng rng(18);
    const auto values = simulate_terminal_values(firms, l, reps, rng);
    for (std::size_t i = 0; i < 10; i += 3) {
        const double rate = effective_variance(l, i);
        const auto m = terminal_moments(firms[i], rate);
        std::vector<double> col(reps);
        for (std::size_t r = 0; r < reps; ++r) col[r] = values[r * 10 + i];
        const auto sum = stats::summarize(col);
        // Standard error of the sample variance from exact log-normal moments.
        const double a = m.log_mean;
        const double b2 = m.log_variance;
        const double m1 = oracles::lognormal_raw_moment(1, a, b2);
        const double m2 = oracles::lognormal_raw_moment(2, a, b2);
        const double m3 = oracles::lognormal_raw_moment(3, a, b2);
        const double m4 = oracles::lognormal_raw_moment(4, a, b2);
        const double mu4 = m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1;
        const double var = m2 - m1 * m1;
        const double se_var = std::sqrt((mu4 - var * var) / static_cast<double>(reps));
        CHECK(std::fabs(sum.sd * sum.sd - m.variance) <= 3.0 * se_var);
        CHECK(var == doctest::Approx(m.variance).epsilon(1e-10));
    }
}
