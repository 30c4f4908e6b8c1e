#include "fracback/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace fracback {

void ProblemConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("problem: alpha must lie strictly inside (0,1)");
    }
    if (!mu) {
        throw std::invalid_argument("problem: mu(t) is not set");
    }
    for (std::size_t k = 0; k <= mesh.levels(); ++k) {
        const double m = mu(mesh.time(k));
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw std::invalid_argument("problem: mu(t) must be nonnegative, mu(" + std::to_string(mesh.time(k)) +
                                        ") = " + std::to_string(m));
        }
    }
}

namespace {

ProblemConfig validated(ProblemConfig config) {
    config.validate();
    return config;
}

TridiagonalMatrix step_matrix_from(double leading, double mu_over_tau, std::size_t n, double h) {
    TridiagonalMatrix m = negative_laplacian(n, h, 1.0 + mu_over_tau);
    for (double& d : m.diag) d += leading;
    return m;
}

}  // namespace

TridiagonalMatrix assemble_step_matrix(const ProblemConfig& config, std::size_t k, const L1Weights& weights) {
    if (k < 1 || k > config.mesh.levels() || weights.level != k) {
        throw std::invalid_argument("assemble_step_matrix: level mismatch");
    }
    const double leading = weights.coefficient(k) / weights.gamma_2ma;
    const double mu_over_tau = config.mu(config.mesh.time(k)) / config.mesh.step(k);
    return step_matrix_from(leading, mu_over_tau, config.interior(), config.grid.spacing());
}

StateVector step(const ProblemConfig& config, std::size_t k, const L1Weights& weights, std::span<const double> history,
                 std::span<const double> previous, std::span<const double> source_k) {
    const std::size_t n = config.interior();
    if (history.size() != n || previous.size() != n || source_k.size() != n) {
        throw std::invalid_argument("step: vector length mismatch");
    }
    const double mu_over_tau = config.mu(config.mesh.time(k)) / config.mesh.step(k);
    const StateVector lap_prev = apply_discrete_laplacian(previous, config.grid.spacing());
    StateVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = history[i] + source_k[i] - mu_over_tau * lap_prev[i];
    }
    return solve_tridiagonal(assemble_step_matrix(config, k, weights), rhs);
}

ForwardSolver::ForwardSolver(ProblemConfig config)
    : config_(validated(std::move(config))), weights_(config_.mesh, config_.alpha) {
    const std::size_t levels = config_.mesh.levels();
    const std::size_t n = config_.interior();
    const double h = config_.grid.spacing();

    mu_.resize(levels + 1);
    for (std::size_t k = 0; k <= levels; ++k) mu_[k] = config_.mu(config_.mesh.time(k));

    factors_.reserve(levels);
    for (std::size_t k = 1; k <= levels; ++k) {
        factors_.emplace_back(step_matrix_from(weights_.leading(k), mu_[k] / config_.mesh.step(k), n, h));
    }

    source_.assign(levels * n, 0.0);
    has_source_ = static_cast<bool>(config_.source);
    if (has_source_) {
        for (std::size_t k = 1; k <= levels; ++k) {
            const double t = config_.mesh.time(k);
            double* row = source_.data() + (k - 1) * n;
            for (std::size_t i = 0; i < n; ++i) row[i] = config_.source(config_.grid.node(i + 1), t);
        }
    }
}

std::span<const double> ForwardSolver::source_at(std::size_t k) const {
    const std::size_t n = config_.interior();
    return {source_.data() + (k - 1) * n, n};
}

TridiagonalMatrix ForwardSolver::step_matrix(std::size_t k) const {
    return step_matrix_from(weights_.leading(k), mu_[k] / config_.mesh.step(k), config_.interior(),
                            config_.grid.spacing());
}

Trajectory ForwardSolver::solve(std::span<const double> u0, Forcing forcing) const {
    const std::size_t levels = config_.mesh.levels();
    const std::size_t n = config_.interior();
    if (u0.size() != n) {
        throw std::invalid_argument("forward solve: initial state has length " + std::to_string(u0.size()) +
                                    ", expected " + std::to_string(n));
    }
    const double inv_h2 = 1.0 / (config_.grid.spacing() * config_.grid.spacing());
    const bool with_source = has_source_ && forcing == Forcing::kWithSource;

    Trajectory traj(levels, n);
    std::copy(u0.begin(), u0.end(), traj.state(0).begin());

    for (std::size_t k = 1; k <= levels; ++k) {
        std::span<double> rhs = traj.state(k);
        const auto coeffs = weights_.history_coefficients(k);

        // Memory term: r^k = sum_{j<k} c_{k,j} u^j.
        {
            const double* u = traj.state(0).data();
            const double c = coeffs[0];
            for (std::size_t i = 0; i < n; ++i) rhs[i] = c * u[i];
        }
        for (std::size_t j = 1; j < k; ++j) {
            const double* u = traj.state(j).data();
            const double c = coeffs[j];
            double* r = rhs.data();
            for (std::size_t i = 0; i < n; ++i) r[i] += c * u[i];
        }

        // -(mu^k/tau_k) L_h u^{k-1}
        const double s = mu_[k] / config_.mesh.step(k) * inv_h2;
        const auto prev = traj.state(k - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double left = i > 0 ? prev[i - 1] : 0.0;
            const double right = i + 1 < n ? prev[i + 1] : 0.0;
            rhs[i] -= s * (left - 2.0 * prev[i] + right);
        }

        if (with_source) {
            const auto f = source_at(k);
            for (std::size_t i = 0; i < n; ++i) rhs[i] += f[i];
        }
        factors_[k - 1].solve_in_place(rhs);
    }
    return traj;
}

StateVector ForwardSolver::terminal(std::span<const double> u0, Forcing forcing) const {
    return solve(u0, forcing).terminal_copy();
}

Trajectory solve_forward(const ProblemConfig& config, std::span<const double> u0) {
    return ForwardSolver(config).solve(u0);
}

EnergyBalance energy_balance(const ForwardSolver& solver, const Trajectory& trajectory) {
    const auto& cfg = solver.config();
    const double h = cfg.grid.spacing();
    const std::size_t levels = cfg.mesh.levels();

    double max_l2 = 0.0;
    double dissipation = 0.0;
    double max_mu_grad = 0.0;
    double forcing = 0.0;
    for (std::size_t k = 0; k <= levels; ++k) {
        const DiscreteNorms nk = discrete_norms(trajectory.state(k), h);
        const double grad2 = nk.grad_l2h * nk.grad_l2h;
        max_l2 = std::max(max_l2, nk.l2h * nk.l2h);
        max_mu_grad = std::max(max_mu_grad, solver.mu_at(k) * grad2);
        if (k >= 1) {
            const double tau = cfg.mesh.step(k);
            dissipation += tau * grad2;
            const double f2 = h_inner(solver.source_at(k), solver.source_at(k), h);
            forcing += tau * f2;
        }
    }
    const double u0_2 = h_inner(trajectory.state(0), trajectory.state(0), h);
    return EnergyBalance{max_l2 + dissipation + max_mu_grad, u0_2 + forcing};
}

StateVector sample_interior(const SpaceGrid& grid, const std::function<double(double)>& fn) {
    StateVector v(grid.interior_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i + 1));
    return v;
}

}  // namespace fracback
