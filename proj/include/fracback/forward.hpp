#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracback/caputo.hpp"
#include "fracback/linalg.hpp"
#include "fracback/mesh.hpp"

namespace fracback {

using TimeFunction = std::function<double(double t)>;
using SourceFunction = std::function<double(double x, double t)>;

/// One instance of
///   d_t^alpha u - u_xx - mu(t) u_xxt = f(x, t),  u(0,t) = u(l,t) = 0
/// on a fixed space grid and time mesh.
struct ProblemConfig {
    double alpha = 0.5;
    SpaceGrid grid{1.0, 2};
    TimeMesh mesh{1.0, 1, 1.0};
    TimeFunction mu;
    SourceFunction source;  // empty means f == 0
    std::string mu_label = "custom";

    /// Checks alpha in (0,1), mu callable and mu(t_k) >= 0 on every mesh node.
    void validate() const;

    std::size_t interior() const { return grid.interior_count(); }
};

/// Discrete trajectory u^0..u^M, stored level by level in one buffer.
class Trajectory {
public:
    Trajectory(std::size_t levels, std::size_t interior)
        : levels_(levels), interior_(interior), values_((levels + 1) * interior, 0.0) {}

    std::size_t levels() const { return levels_; }
    std::size_t interior() const { return interior_; }

    std::span<double> state(std::size_t k) { return {values_.data() + k * interior_, interior_}; }
    std::span<const double> state(std::size_t k) const { return {values_.data() + k * interior_, interior_}; }
    std::span<const double> terminal() const { return state(levels_); }
    StateVector terminal_copy() const {
        auto t = terminal();
        return {t.begin(), t.end()};
    }

private:
    std::size_t levels_;
    std::size_t interior_;
    std::vector<double> values_;
};

/// A^k = d_{k,k}/Gamma(2-a) I - (1 + mu^k/tau_k) L_h.
TridiagonalMatrix assemble_step_matrix(const ProblemConfig& config, std::size_t k, const L1Weights& weights);

/// One level of the scheme: solves
///   A^k u^k = r^k + f^k - (mu^k/tau_k) L_h u^{k-1}.
StateVector step(const ProblemConfig& config, std::size_t k, const L1Weights& weights, std::span<const double> history,
                 std::span<const double> previous, std::span<const double> source_k);

/// Whether the source term is applied during a solve. The homogeneous
/// mode is what impulse responses need.
enum class Forcing { kWithSource, kHomogeneous };

/// Precomputes everything that does not depend on the initial state (L1
/// weight table, mu^k, factorised step matrices, sampled source) so that
/// repeated solves only pay for the memory sum. solve() is const and
/// touches no shared mutable state; concurrent calls are safe.
class ForwardSolver {
public:
    explicit ForwardSolver(ProblemConfig config);

    const ProblemConfig& config() const { return config_; }
    const L1WeightTable& weights() const { return weights_; }

    Trajectory solve(std::span<const double> u0, Forcing forcing = Forcing::kWithSource) const;
    StateVector terminal(std::span<const double> u0, Forcing forcing = Forcing::kWithSource) const;

    double mu_at(std::size_t k) const { return mu_[k]; }
    /// f^k at interior nodes (zeros when there is no source).
    std::span<const double> source_at(std::size_t k) const;
    TridiagonalMatrix step_matrix(std::size_t k) const;

private:
    ProblemConfig config_;
    L1WeightTable weights_;
    std::vector<double> mu_;
    std::vector<TridiagonalFactorization> factors_;
    std::vector<double> source_;  // M x (N-1), level k at row k-1
    bool has_source_ = false;
};

Trajectory solve_forward(const ProblemConfig& config, std::span<const double> u0);

/// Both sides of the discrete energy estimate
///   L(m) = max_k |u^k|_h^2 + sum_k tau_k |grad u^k|_h^2 + max_k mu^k |grad u^k|_h^2
///   R    = |u^0|_h^2 + sum_k tau_k |f^k|_h^2
/// evaluated at m = M.
struct EnergyBalance {
    double left = 0.0;
    double right = 0.0;
    double ratio() const { return left / right; }
};

EnergyBalance energy_balance(const ForwardSolver& solver, const Trajectory& trajectory);

/// Samples a function of x at the interior nodes.
StateVector sample_interior(const SpaceGrid& grid, const std::function<double(double)>& fn);

}  // namespace fracback
