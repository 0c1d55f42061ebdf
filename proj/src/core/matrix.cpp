#include "matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace creditdiv {

bool SquareMatrix::is_symmetric(double tol) const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (std::fabs(at(i, j) - at(j, i)) > tol) return false;
    return true;
}

double SquareMatrix::max_abs_diff(const SquareMatrix& other) const {
    double m = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::fabs(a_[i] - other.a_[i]));
    return m;
}

SquareMatrix cholesky_factor(const SquareMatrix& c) {
    const std::size_t n = c.dim();
    if (n == 0) fail(errc::invalid_argument, "cholesky_factor: empty matrix");
    if (!c.is_symmetric(0.0)) fail(errc::invalid_argument, "cholesky_factor: matrix is not symmetric");
    SquareMatrix l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = c.at(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l.at(j, k) * l.at(j, k);
        if (!(diag > 0.0))
            fail(errc::not_positive_definite,
                 "cholesky_factor: matrix not positive definite at pivot " + std::to_string(j));
        const double d = std::sqrt(diag);
        l.at(j, j) = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = c.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = s / d;
        }
    }
    return l;
}

namespace {

// Householder tridiagonalization, eigenvalues only. Reduces the symmetric
// matrix in place via rank-2 updates B' = B - v q^T - q v^T with
// w = B v, q = 2(w - (v.w) v). Returns diagonal d and subdiagonal e
// (e[0] unused).
void tridiagonalize(SquareMatrix& a, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = a.dim();
    std::vector<double> v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1; // trailing block size
        double norm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = a.at(k + 1 + i, k);
            norm2 += v[i] * v[i];
        }
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) {
            e[k + 1] = 0.0;
            continue;
        }
        const double alpha = v[0] >= 0.0 ? -norm : norm;
        v[0] -= alpha;
        double vn2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) vn2 += v[i] * v[i];
        if (vn2 == 0.0) {
            e[k + 1] = alpha;
            continue;
        }
        const double inv = 1.0 / std::sqrt(vn2);
        for (std::size_t i = 0; i < m; ++i) v[i] *= inv;

        // w = B v over the trailing block, s = v.w
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            const double* row = a.data() + (k + 1 + i) * n + (k + 1);
            for (std::size_t j = 0; j < m; ++j) acc += row[j] * v[j];
            w[i] = acc;
            s += v[i] * acc;
        }
        for (std::size_t i = 0; i < m; ++i) w[i] = 2.0 * (w[i] - s * v[i]); // q
        for (std::size_t i = 0; i < m; ++i) {
            double* row = a.data() + (k + 1 + i) * n + (k + 1);
            const double vi = v[i];
            const double qi = w[i];
            for (std::size_t j = 0; j < m; ++j) row[j] -= vi * w[j] + qi * v[j];
        }
        a.at(k + 1, k) = alpha;
        a.at(k, k + 1) = alpha;
        for (std::size_t i = 1; i < m; ++i) {
            a.at(k + 1 + i, k) = 0.0;
            a.at(k, k + 1 + i) = 0.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = a.at(i, i);
    for (std::size_t i = 1; i < n; ++i) e[i] = a.at(i, i - 1);
    e[0] = 0.0;
}

// Implicit-shift QL on a symmetric tridiagonal; eigenvalues land in d.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    const double eps = 0x1.0p-52;
    double f = 0.0;
    double tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m < n && std::fabs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 64) fail(errc::numerical_error, "symmetric_eigenvalues: QL failed to converge");
                const double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    const double gi = c * e[i];
                    const double hi = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gi;
                    d[i + 1] = hi + s * (c * gi + s * d[i]);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace

std::vector<double> symmetric_eigenvalues(const SquareMatrix& c) {
    const std::size_t n = c.dim();
    if (n == 0) fail(errc::invalid_argument, "symmetric_eigenvalues: empty matrix");
    if (!c.is_symmetric(0.0)) fail(errc::invalid_argument, "symmetric_eigenvalues: matrix is not symmetric");
    if (n == 1) return {c.at(0, 0)};
    SquareMatrix a = c;
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    tridiagonalize(a, d, e);
    tridiagonal_ql(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

double min_eigenvalue(const SquareMatrix& c) { return symmetric_eigenvalues(c).front(); }

} // namespace creditdiv
