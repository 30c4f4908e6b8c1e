#pragma once

// Dense reference routines used as oracles by the tests. Deliberately
// naive: partial-pivot elimination and cyclic Jacobi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "fracback/linalg.hpp"

namespace testing {

inline std::vector<double> gauss_solve(fracback::DenseMatrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        }
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(p, j));
            std::swap(b[c], b[p]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the eigenvector matrix (columns).
inline std::pair<std::vector<double>, fracback::DenseMatrix> jacobi_eigen(fracback::DenseMatrix a) {
    const std::size_t n = a.rows();
    fracback::DenseMatrix v = fracback::DenseMatrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    return {eig, v};
}

/// Tikhonov solution through the SVD filter
///   u = sum_i sigma_i / (sigma_i^2 + lambda) (u_i . d) v_i,
/// with the right singular vectors and sigma_i^2 taken from eig(F^T F).
inline std::vector<double> svd_filter_solve(const fracback::DenseMatrix& f, const std::vector<double>& d,
                                            double lambda) {
    auto [s2, v] = jacobi_eigen(f.gram());
    const std::size_t n = f.cols();
    const std::vector<double> ftd = f.transpose_multiply(d);
    // u_i . d = (F v_i . d) / sigma_i = (v_i . F^T d) / sigma_i, so the
    // filter factor becomes 1 / (sigma_i^2 + lambda).
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double proj = 0.0;
        for (std::size_t k = 0; k < n; ++k) proj += v(k, i) * ftd[k];
        const double coef = proj / (std::max(s2[i], 0.0) + lambda);
        for (std::size_t k = 0; k < n; ++k) x[k] += coef * v(k, i);
    }
    return x;
}

inline fracback::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    fracback::DenseMatrix m(rows, cols);
    for (auto& x : m.data()) x = nd(rng);
    return m;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

}  // namespace testing
