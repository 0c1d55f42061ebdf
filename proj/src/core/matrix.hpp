#pragma once

#include <cstddef>
#include <vector>

namespace creditdiv {

// Dense square matrix of doubles, row-major. Small value type; all the
// numeric kernels below assume symmetric input where stated.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    std::size_t dim() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    static SquareMatrix identity(std::size_t n) {
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    bool is_symmetric(double tol = 0.0) const;
    double max_abs_diff(const SquareMatrix& other) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// Lower-triangular L with L*L^T == c. Throws not_positive_definite naming
// the failing pivot index (0-based).
SquareMatrix cholesky_factor(const SquareMatrix& c);

// All eigenvalues of a symmetric matrix, ascending (Householder
// tridiagonalization + implicit-shift QL).
std::vector<double> symmetric_eigenvalues(const SquareMatrix& c);

double min_eigenvalue(const SquareMatrix& c);

} // namespace creditdiv
