#include "fracback/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracback/error.hpp"

namespace fracback {

namespace {

constexpr double kPivotTolerance = 1e-14;
constexpr double kSymmetryTolerance = 1e-12;

}  // namespace

std::vector<double> TridiagonalMatrix::apply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double TridiagonalMatrix::inf_norm() const {
    const std::size_t n = size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::abs(diag[i]);
        if (i > 0) s += std::abs(lower[i - 1]);
        if (i + 1 < n) s += std::abs(upper[i]);
        best = std::max(best, s);
    }
    return best;
}

TridiagonalFactorization::TridiagonalFactorization(const TridiagonalMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0 || m.lower.size() + 1 != n || m.upper.size() + 1 != n) {
        throw std::invalid_argument("tridiagonal: inconsistent band sizes");
    }
    lower_ = m.lower;
    upper_prime_.assign(n, 0.0);
    inv_pivot_.assign(n, 0.0);

    double pivot = m.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            pivot = m.diag[i] - m.lower[i - 1] * upper_prime_[i - 1];
        }
        double row_scale = std::abs(m.diag[i]);
        if (i > 0) row_scale += std::abs(m.lower[i - 1]);
        if (i + 1 < n) row_scale += std::abs(m.upper[i]);
        if (!(std::abs(pivot) >= kPivotTolerance * row_scale) || row_scale == 0.0) {
            throw NumericalError("tridiagonal: pivot " + std::to_string(pivot) + " vanishes at row " +
                                 std::to_string(i));
        }
        inv_pivot_[i] = 1.0 / pivot;
        if (i + 1 < n) upper_prime_[i] = m.upper[i] * inv_pivot_[i];
    }
}

void TridiagonalFactorization::solve_in_place(std::span<double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) {
        throw std::invalid_argument("tridiagonal: rhs length mismatch");
    }
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) {
        rhs[i] = (rhs[i] - lower_[i - 1] * rhs[i - 1]) * inv_pivot_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= upper_prime_[i] * rhs[i + 1];
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
    if (values.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("multiply: length mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = data_.data() + i * cols_;
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> DenseMatrix::transpose_multiply(std::span<const double> x) const {
    if (x.size() != rows_) throw std::invalid_argument("transpose_multiply: length mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = data_.data() + i * cols_;
        const double xi = x[i];
        for (std::size_t j = 0; j < cols_; ++j) y[j] += row[j] * xi;
    }
    return y;
}

DenseMatrix DenseMatrix::gram() const {
    DenseMatrix g(cols_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* row = data_.data() + r * cols_;
        for (std::size_t i = 0; i < cols_; ++i) {
            const double ri = row[i];
            double* out = &g(i, 0);
            for (std::size_t j = i; j < cols_; ++j) out[j] += ri * row[j];
        }
    }
    for (std::size_t i = 0; i < cols_; ++i) {
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    }
    return g;
}

StateVector apply_discrete_laplacian(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    const double inv_h2 = 1.0 / (h * h);
    StateVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? v[i - 1] : 0.0;
        const double right = i + 1 < n ? v[i + 1] : 0.0;
        out[i] = (left - 2.0 * v[i] + right) * inv_h2;
    }
    return out;
}

TridiagonalMatrix negative_laplacian(std::size_t n, double h, double scale) {
    const double c = scale / (h * h);
    TridiagonalMatrix m;
    m.diag.assign(n, 2.0 * c);
    m.lower.assign(n - 1, -c);
    m.upper.assign(n - 1, -c);
    return m;
}

StateVector solve_tridiagonal(const TridiagonalMatrix& m, std::span<const double> rhs) {
    TridiagonalFactorization f(m);
    StateVector x(rhs.begin(), rhs.end());
    f.solve_in_place(x);
    return x;
}

std::vector<double> solve_spd_dense(const DenseMatrix& a, std::span<const double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) {
        throw std::invalid_argument("solve_spd_dense: dimension mismatch");
    }
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance * scale) {
                throw std::invalid_argument("solve_spd_dense: matrix is not symmetric");
            }
        }
    }

    // Lower Cholesky factor, in place on a copy.
    DenseMatrix l = a;
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = l(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > 0.0)) {
            throw NumericalError("solve_spd_dense: non-positive pivot " + std::to_string(pivot) + " at column " +
                                 std::to_string(j));
        }
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = l(i, j);
            const double* li = &l(i, 0);
            const double* lj = &l(j, 0);
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            l(i, j) = s / ljj;
        }
    }

    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
        x[i] = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return x;
}

DiscreteNorms discrete_norms(std::span<const double> v, double h) {
    DiscreteNorms out;
    double sq = 0.0;
    double grad_sq = 0.0;
    double prev = 0.0;
    for (double vi : v) {
        out.inf = std::max(out.inf, std::abs(vi));
        sq += vi * vi;
        const double g = (vi - prev) / h;
        grad_sq += g * g;
        prev = vi;
    }
    const double last = (0.0 - prev) / h;
    grad_sq += last * last;
    out.l2h = std::sqrt(h * sq);
    out.grad_l2h = std::sqrt(h * grad_sq);
    return out;
}

double h_inner(std::span<const double> u, std::span<const double> v, double h) {
    if (u.size() != v.size()) throw std::invalid_argument("h_inner: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return h * s;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace fracback
