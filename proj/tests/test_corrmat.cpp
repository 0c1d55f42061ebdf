#include "doctest.h"

#include <cmath>
#include <string>

#include "corrmat.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace creditdiv;
using namespace creditdiv::corrmat;

namespace {

void check_basic_invariants(const CorrelationMatrix& s, const NoiseBand& band) {
    const std::size_t n = s.dim();
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(s.entry(i, i) == 1.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            REQUIRE(s.entry(i, j) == s.entry(j, i));
            const double a = std::fabs(s.entry(i, j));
            REQUIRE(a >= band.rho_min);
            REQUIRE(a <= band.rho_max);
        }
    }
}

bool is_pd_by_cholesky(const CorrelationMatrix& s) {
    try {
        (void)cholesky_factor(s.matrix());
        return true;
    } catch (const error&) {
        return false;
    }
}

} // namespace

TEST_CASE("base matrix sits at the band midpoint") {
    const auto low = generate_base_matrix(2, NoiseBand::low());
    CHECK(low.entry(0, 1) == doctest::Approx(0.25));
    CHECK(std::fabs(low.entry(0, 1)) >= 0.1);
    CHECK(std::fabs(low.entry(0, 1)) <= 0.4);
    CHECK(low.entry(0, 0) == 1.0);

    const NoiseBand point(0.9, 0.9, Regime::High);
    const auto degenerate = generate_base_matrix(2, point);
    CHECK(degenerate.entry(0, 1) == 0.9);

    CHECK_THROWS_AS((void)generate_base_matrix(1, NoiseBand::low()), error);
}

TEST_CASE("base matrix at dim 10 high band is positive definite (Jacobi oracle)") {
    Rng rng(42);
    const auto s = generate_correlation_matrix(10, NoiseBand::high(), rng);
    check_basic_invariants(s, NoiseBand::high());
    CHECK(oracles::jacobi_min_eigenvalue(s.matrix()) > 0.0);
}

TEST_CASE("zero noise is the identity transformation") {
    Rng rng(1);
    const auto base = generate_base_matrix(6, NoiseBand::low());
    const auto same = apply_banded_noise(base, NoiseBand::low(), rng, 0.0);
    CHECK(same.matrix().max_abs_diff(base.matrix()) == 0.0);
}

TEST_CASE("noise respects the safety margin: lambda_min 0.05, eps 0.04") {
    // One-factor base at rho = 0.95 has lambda_min = 0.05 exactly.
    const NoiseBand tight(0.91, 0.99, Regime::High);
    const auto base = generate_base_matrix(8, tight);
    CHECK(oracles::jacobi_min_eigenvalue(base.matrix()) == doctest::Approx(0.05).epsilon(1e-12));
    Rng rng(99);
    const auto noisy = apply_banded_noise(base, tight, rng, 0.04);
    check_basic_invariants(noisy, tight);
    CHECK(oracles::jacobi_min_eigenvalue(noisy.matrix()) > 0.0);
}

TEST_CASE("infeasible noise magnitude names the offending entry") {
    const NoiseBand band(0.8, 0.9, Regime::High);
    const auto base = generate_base_matrix(12, band);
    Rng rng(4);
    try {
        (void)apply_banded_noise(base, band, rng, 0.12); // edge distance is 0.05
        FAIL("expected band_infeasible");
    } catch (const error& e) {
        CHECK(e.code() == errc::band_infeasible);
        CHECK(std::string(e.what()).find("entry (") != std::string::npos);
    }
}

TEST_CASE("auto-epsilon noise keeps entries in band and PD") {
    Rng rng(12);
    const auto base = generate_base_matrix(9, NoiseBand::high());
    const auto noisy = apply_banded_noise(base, NoiseBand::high(), rng);
    check_basic_invariants(noisy, NoiseBand::high());
    CHECK(is_pd_by_cholesky(noisy));
}

TEST_CASE("2000 low-band matrices of dim 10 all pass in-band and PD checks") {
    Rng rng(2016);
    int eig_checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto s = generate_correlation_matrix(10, NoiseBand::low(), rng);
        check_basic_invariants(s, NoiseBand::low());
        REQUIRE(is_pd_by_cholesky(s));
        if (i % 100 == 0) {
            REQUIRE(min_eigenvalue(s.matrix()) > 1e-10);
            ++eig_checked;
        }
    }
    CHECK(eig_checked == 20);
}

TEST_CASE("sign conjugation is identity for constant patterns") {
    Rng rng(8);
    const auto s = generate_correlation_matrix(7, NoiseBand::low(), rng);
    const auto plus = apply_sign_pattern(s, SignPattern::all_positive(7));
    CHECK(plus.matrix().max_abs_diff(s.matrix()) == 0.0);
    const auto minus = apply_sign_pattern(s, SignPattern{std::vector<int>(7, -1)});
    CHECK(minus.matrix().max_abs_diff(s.matrix()) == 0.0);
}

TEST_CASE("sign conjugation flips the 2x2 entry and keeps the spectrum") {
    SquareMatrix m(2, 0.9);
    m.at(0, 0) = m.at(1, 1) = 1.0;
    const CorrelationMatrix s(std::move(m));
    const auto flipped = apply_sign_pattern(s, SignPattern{{1, -1}});
    CHECK(flipped.entry(0, 1) == -0.9);
    const auto ev1 = oracles::jacobi_eigenvalues(s.matrix());
    const auto ev2 = oracles::jacobi_eigenvalues(flipped.matrix());
    for (std::size_t i = 0; i < 2; ++i) CHECK(ev1[i] == doctest::Approx(ev2[i]).epsilon(1e-12));
}

TEST_CASE("sign conjugation preserves the eigenvalue multiset to 1e-10") {
    Rng rng(33);
    for (std::size_t dim : {5u, 16u}) {
        const auto s = generate_correlation_matrix(dim, NoiseBand::high(), rng);
        const auto p = SignPattern::random(dim, rng);
        const auto t = apply_sign_pattern(s, p);
        const auto ev1 = symmetric_eigenvalues(s.matrix());
        const auto ev2 = symmetric_eigenvalues(t.matrix());
        for (std::size_t i = 0; i < dim; ++i) CHECK(std::fabs(ev1[i] - ev2[i]) <= 1e-10);
    }
}

TEST_CASE("sign pattern length mismatch is rejected") {
    Rng rng(2);
    const auto s = generate_correlation_matrix(4, NoiseBand::low(), rng);
    CHECK_THROWS_AS((void)apply_sign_pattern(s, SignPattern::all_positive(3)), error);
}

TEST_CASE("generated matrices across dims and regimes satisfy all invariants") {
    for (auto band : {NoiseBand::low(), NoiseBand::high()}) {
        for (std::size_t dim : {10u, 50u, 90u, 100u}) {
            Rng rng(1000 + dim + (band.regime == Regime::High ? 1 : 0));
            double offdiag_sq_sum = 0.0, offdiag_sum = 0.0;
            std::size_t offdiag_count = 0;
            const int eig_stride = dim <= 10 ? 1 : (dim <= 50 ? 4 : 16);
            for (int seed_idx = 0; seed_idx < 1000; ++seed_idx) {
                const auto s = generate_correlation_matrix(dim, band, rng);
                check_basic_invariants(s, band);
                REQUIRE(is_pd_by_cholesky(s));
                if (seed_idx % eig_stride == 0) REQUIRE(min_eigenvalue(s.matrix()) > 1e-10);
                for (std::size_t i = 0; i < dim && i < 4; ++i)
                    for (std::size_t j = i + 1; j < dim && j < 5; ++j) {
                        const double a = std::fabs(s.entry(i, j));
                        offdiag_sum += a;
                        offdiag_sq_sum += a * a;
                        ++offdiag_count;
                    }
            }
            // Not the degenerate constant matrix: magnitudes vary.
            const double mean = offdiag_sum / static_cast<double>(offdiag_count);
            const double var = offdiag_sq_sum / static_cast<double>(offdiag_count) - mean * mean;
            CHECK(std::sqrt(std::max(var, 0.0)) > 0.0);
        }
        for (std::size_t dim : {500u, 1000u}) {
            Rng rng(7000 + dim);
            for (int seed_idx = 0; seed_idx < 20; ++seed_idx) {
                const auto s = generate_correlation_matrix(dim, band, rng);
                check_basic_invariants(s, band);
                REQUIRE(is_pd_by_cholesky(s));
                if (seed_idx < 2) REQUIRE(min_eigenvalue(s.matrix()) > 1e-10);
            }
        }
    }
}

TEST_CASE("composed generator equals the staged operations bit for bit") {
    for (std::size_t dim : {2u, 9u, 40u}) {
        for (auto band : {NoiseBand::low(), NoiseBand::high()}) {
            Rng r1(555 + dim), r2(555 + dim);
            const auto composed = generate_correlation_matrix(dim, band, r1);
            const double eps = std::min(band.half_width(), 0.95 * (1.0 - band.midpoint()));
            const auto base = generate_base_matrix(dim, band);
            const auto noisy = apply_banded_noise(base, band, r2, eps);
            const auto staged = apply_sign_pattern(noisy, SignPattern::random(dim, r2));
            CHECK(composed.matrix().max_abs_diff(staged.matrix()) == 0.0);
        }
    }
}

TEST_CASE("point band with signs gives exactly +-0.9") {
    const NoiseBand point(0.9, 0.9, Regime::High);
    Rng rng(5);
    const auto s = generate_correlation_matrix(2, point, rng);
    CHECK(std::fabs(s.entry(0, 1)) == 0.9);
}

TEST_CASE("csv dump is row-major with 17 significant digits") {
    SquareMatrix m(2, 0.125);
    m.at(0, 0) = m.at(1, 1) = 1.0;
    const CorrelationMatrix s(std::move(m));
    CHECK(to_csv(s) == "1,0.125\n0.125,1\n");
}

TEST_CASE("band validation") {
    CHECK_THROWS_AS(NoiseBand(0.0, 0.4, Regime::Low), error);
    CHECK_THROWS_AS(NoiseBand(0.5, 0.4, Regime::Low), error);
    CHECK_THROWS_AS(NoiseBand(0.5, 1.2, Regime::Low), error);
    CHECK_NOTHROW(NoiseBand(0.9, 0.9, Regime::High));
}
