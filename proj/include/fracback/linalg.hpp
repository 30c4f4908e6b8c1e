#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracback {

/// Interior nodal values u_1..u_{N-1} at one time level; the Dirichlet
/// boundary values u_0 = u_N = 0 are implicit.
using StateVector = std::vector<double>;

struct TridiagonalMatrix {
    std::vector<double> lower;  // sub-diagonal, size n-1
    std::vector<double> diag;   // size n
    std::vector<double> upper;  // super-diagonal, size n-1

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(std::span<const double> x) const;
    /// max_i sum_j |a_ij|
    double inf_norm() const;
};

/// Thomas elimination precomputed once so the same matrix can be solved
/// against many right-hand sides.
class TridiagonalFactorization {
public:
    explicit TridiagonalFactorization(const TridiagonalMatrix& m);

    std::size_t size() const { return inv_pivot_.size(); }
    /// Overwrites rhs with the solution.
    void solve_in_place(std::span<double> rhs) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_prime_;
    std::vector<double> inv_pivot_;
};

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    std::vector<double> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    std::vector<double> multiply(std::span<const double> x) const;
    /// A^T x
    std::vector<double> transpose_multiply(std::span<const double> x) const;
    /// A^T A
    DenseMatrix gram() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// (L_h v)_i = (v_{i-1} - 2 v_i + v_{i+1}) / h^2 with zero ghost values.
StateVector apply_discrete_laplacian(std::span<const double> v, double h);

/// -L_h in assembled tridiagonal form, scaled by `scale`.
TridiagonalMatrix negative_laplacian(std::size_t n, double h, double scale = 1.0);

StateVector solve_tridiagonal(const TridiagonalMatrix& m, std::span<const double> rhs);

/// Cholesky solve of a symmetric positive definite system. Throws
/// std::invalid_argument for an asymmetric A and NumericalError on a
/// non-positive pivot.
std::vector<double> solve_spd_dense(const DenseMatrix& a, std::span<const double> b);

struct DiscreteNorms {
    double inf = 0.0;
    double l2h = 0.0;       // sqrt(h sum v_i^2)
    double grad_l2h = 0.0;  // sqrt(h sum_{i=0}^{N-1} ((v_{i+1}-v_i)/h)^2), v_0 = v_N = 0
};

DiscreteNorms discrete_norms(std::span<const double> v, double h);

/// (u, v)_h = h sum u_i v_i
double h_inner(std::span<const double> u, std::span<const double> v, double h);

double max_abs(std::span<const double> v);
double norm2(std::span<const double> v);

}  // namespace fracback
