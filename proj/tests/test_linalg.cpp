#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fracback/error.hpp"
#include "fracback/linalg.hpp"
#include "support.hpp"

using namespace fracback;

namespace {

DenseMatrix to_dense(const TridiagonalMatrix& m) {
    const std::size_t n = m.size();
    DenseMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = m.diag[i];
        if (i + 1 < n) {
            d(i, i + 1) = m.upper[i];
            d(i + 1, i) = m.lower[i];
        }
    }
    return d;
}

}  // namespace

TEST_CASE("discrete laplacian stencil") {
    const std::vector<double> v{0.0, 1.0, 0.0};
    const auto lv = apply_discrete_laplacian(v, 0.25);
    CHECK(lv[0] == doctest::Approx(16.0));
    CHECK(lv[1] == doctest::Approx(-32.0));
    CHECK(lv[2] == doctest::Approx(16.0));
    for (double x : apply_discrete_laplacian(std::vector<double>(5, 0.0), 0.1)) CHECK(x == 0.0);
}

TEST_CASE("discrete sine eigenvector") {
    const std::size_t N = 64;
    const double h = 1.0 / N;
    const int k = 3;
    std::vector<double> v(N - 1);
    for (std::size_t i = 1; i < N; ++i) v[i - 1] = std::sin(k * std::numbers::pi * i * h);
    const double lam = 4.0 / (h * h) * std::pow(std::sin(k * std::numbers::pi * h / 2.0), 2);
    const auto lv = apply_discrete_laplacian(v, h);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(lv[i] + lam * v[i]) < 1e-10);
}

TEST_CASE("negative laplacian matches the stencil") {
    std::mt19937_64 rng(3);
    const auto v = testing::random_vector(17, rng);
    const auto a = negative_laplacian(17, 0.05, 2.5).apply(v);
    const auto b = apply_discrete_laplacian(v, 0.05);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(a[i] == doctest::Approx(-2.5 * b[i]));
}

TEST_CASE("thomas solver small cases") {
    TridiagonalMatrix m{{-1.0, -1.0}, {2.0, 2.0, 2.0}, {-1.0, -1.0}};
    const auto x = solve_tridiagonal(m, std::vector<double>{1.0, 1.0, 1.0});
    CHECK(x[0] == doctest::Approx(1.5));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(1.5));

    TridiagonalMatrix id{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}};
    const std::vector<double> b{3.0, -1.0, 2.0, 0.5};
    CHECK(solve_tridiagonal(id, b) == b);
}

TEST_CASE("thomas solver against dense elimination") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 50;
        TridiagonalMatrix m;
        m.lower.resize(n - 1);
        m.upper.resize(n - 1);
        m.diag.resize(n);
        for (auto& x : m.lower) x = u(rng);
        for (auto& x : m.upper) x = u(rng);
        for (auto& x : m.diag) x = 2.0 + std::abs(u(rng));
        const auto b = testing::random_vector(n, rng);
        const auto x = solve_tridiagonal(m, b);
        const auto ref = testing::gauss_solve(to_dense(m), b);
        CHECK(testing::max_abs_diff(x, ref) < 1e-12);

        const auto mx = m.apply(x);
        const double bound = 1e-12 * (m.inf_norm() * max_abs(x) + max_abs(b));
        CHECK(testing::max_abs_diff(mx, b) <= bound);
    }
}

TEST_CASE("thomas solver reports a vanishing pivot") {
    TridiagonalMatrix m{{1.0}, {1.0, 1.0}, {1.0}};
    CHECK_THROWS_AS(solve_tridiagonal(m, std::vector<double>{1.0, 1.0}), NumericalError);
}

TEST_CASE("dense SPD solve") {
    const auto x = solve_spd_dense(DenseMatrix::identity(3), std::vector<double>{1.0, -2.0, 3.0});
    CHECK(x == std::vector<double>{1.0, -2.0, 3.0});

    DenseMatrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 4.0;
    for (double v : solve_spd_dense(d, std::vector<double>{1.0, 2.0, 4.0})) CHECK(v == doctest::Approx(1.0));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        DenseMatrix a = testing::random_matrix(30, 30, rng).gram();
        for (std::size_t i = 0; i < 30; ++i) a(i, i) += 0.1;
        const auto b = testing::random_vector(30, rng);
        const auto x = solve_spd_dense(a, b);
        CHECK(testing::rel_diff(x, testing::gauss_solve(a, b)) < 1e-10);
        const auto ax = a.multiply(x);
        double res = 0.0;
        for (std::size_t i = 0; i < 30; ++i) res += (ax[i] - b[i]) * (ax[i] - b[i]);
        CHECK(std::sqrt(res) <= 1e-10 * norm2(b));
    }
}

TEST_CASE("dense SPD solve rejects bad input") {
    DenseMatrix asym = DenseMatrix::identity(2);
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(solve_spd_dense(asym, std::vector<double>{1.0, 1.0}), std::invalid_argument);

    DenseMatrix indef = DenseMatrix::identity(2);
    indef(1, 1) = -1.0;
    CHECK_THROWS_AS(solve_spd_dense(indef, std::vector<double>{1.0, 1.0}), NumericalError);
}

TEST_CASE("dense products") {
    std::mt19937_64 rng(29);
    const DenseMatrix a = testing::random_matrix(7, 5, rng);
    const DenseMatrix g = a.gram();
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 7; ++k) s += a(k, i) * a(k, j);
            CHECK(g(i, j) == doctest::Approx(s));
        }
    }
    const auto x = testing::random_vector(7, rng);
    const auto atx = a.transpose_multiply(x);
    for (std::size_t j = 0; j < 5; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 7; ++k) s += a(k, j) * x[k];
        CHECK(atx[j] == doctest::Approx(s));
    }
    DenseMatrix c(3, 2);
    c.set_column(1, std::vector<double>{1.0, 2.0, 3.0});
    CHECK(c.column(1) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(c.column(0) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("discrete norms") {
    const auto n = discrete_norms(std::vector<double>{3.0, -4.0}, 0.5);
    CHECK(n.inf == 4.0);
    CHECK(n.l2h == doctest::Approx(3.5355339));
    const auto z = discrete_norms(std::vector<double>(4, 0.0), 0.2);
    CHECK(z.inf == 0.0);
    CHECK(z.l2h == 0.0);
    CHECK(z.grad_l2h == 0.0);

    const std::size_t N = 200;
    std::vector<double> s(N - 1);
    for (std::size_t i = 1; i < N; ++i) s[i - 1] = std::sin(std::numbers::pi * i / N);
    CHECK(std::abs(discrete_norms(s, 1.0 / N).l2h - std::sqrt(0.5)) < 1e-4);
}

TEST_CASE("green identity and positivity of -L_h") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + trial % 40;
        const double h = 1.0 / static_cast<double>(n + 1);
        const auto v = testing::random_vector(n, rng);
        const auto lv = apply_discrete_laplacian(v, h);
        std::vector<double> neg(n);
        for (std::size_t i = 0; i < n; ++i) neg[i] = -lv[i];
        const double lhs = h_inner(neg, v, h);
        const double g = discrete_norms(v, h).grad_l2h;
        CHECK(std::abs(lhs - g * g) <= 1e-10 * g * g);
        CHECK(lhs > 0.0);
    }
}
