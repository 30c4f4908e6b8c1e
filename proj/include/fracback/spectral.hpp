#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracback/forward.hpp"
#include "fracback/mesh.hpp"

namespace fracback {

/// Independent per-mode route to the backward problem. Each sine mode
/// k obeys the scalar equation
///   d_t^alpha u_k + mu(t) lambda_k u_k' + lambda_k u_k = f_k(t),
/// which is solved on its own fine graded mesh; u_k = u0_k A_k + B_k.
struct OracleConfig {
    double alpha = 0.5;
    double length = 1.0;
    double final_time = 1.0;
    TimeFunction mu;
    SourceFunction source;  // empty means f == 0
    std::size_t fine_levels = 10000;
    /// 0 selects default_grading(alpha).
    double grading = 0.0;
    /// Composite Simpson intervals for sine coefficients (even).
    std::size_t quadrature_intervals = 2048;
};

/// v_k = (2/l) int_0^l v(x) sin(k pi x / l) dx for k = 1..modes, composite Simpson.
std::vector<double> sine_coefficients(const std::function<double(double)>& v, double length, std::size_t modes,
                                      std::size_t intervals = 2048);

/// Same, from samples v(x_0..x_Q) on a uniform grid with Q even.
std::vector<double> sine_coefficients_from_samples(std::span<const double> samples, double length,
                                                   std::size_t modes);

struct ModeSolution {
    std::size_t k = 0;
    double lambda_k = 0.0;
    double u0_k = 0.0;
    double A_k_T = 0.0;
    double B_k_T = 0.0;
    std::vector<double> homogeneous;  // A_k(t_j): u0_k = 1, f_k = 0
    std::vector<double> forced;       // B_k(t_j): u0_k = 0, given f_k

    double value(std::size_t j) const { return u0_k * homogeneous[j] + forced[j]; }
    std::vector<double> trajectory() const;
};

/// exp(-int_0^T dt / mu(t)), the lower bound for every A_k(T).
double gronwall_floor(const TimeFunction& mu, double final_time, std::size_t intervals = 4096);

class SpectralOracle {
public:
    explicit SpectralOracle(OracleConfig config);

    const OracleConfig& config() const { return config_; }
    const TimeMesh& mesh() const { return mesh_; }

    /// Modes 1..count in one sweep over the fine mesh (the L1 weight rows
    /// are shared by all modes). u0 coefficients default to zero.
    std::vector<ModeSolution> solve_modes(std::size_t count, std::span<const double> u0_coefficients = {}) const;
    ModeSolution solve_mode(std::size_t k, double u0_k) const;

    /// f_k(t_j) for j = 0..M.
    std::vector<double> forcing_coefficients(std::size_t k) const;

    /// max_j |d^alpha u + mu lambda D u + lambda u - f_k| over interior fine
    /// nodes, with D the three-point derivative on the nonuniform mesh. The
    /// scheme itself uses a backward difference, so this is O(tau).
    double mode_equation_residual(const ModeSolution& mode) const;

    double gronwall_floor() const;

private:
    std::vector<ModeSolution> solve_lanes(std::span<const std::size_t> modes) const;

    OracleConfig config_;
    TimeMesh mesh_;
};

ModeSolution solve_mode(std::size_t k, const OracleConfig& config, double u0_k);

struct SpectralReconstruction {
    double length = 1.0;
    std::vector<double> psi_k;
    std::vector<ModeSolution> modes;

    std::vector<double> coefficients() const;
    double evaluate(double x) const;
    StateVector sample(const SpaceGrid& grid) const;
};

/// u0_k = (psi_k - B_k(T)) / A_k(T) for k = 1..modes. Throws NumericalError
/// if any A_k(T) <= 0.
SpectralReconstruction reconstruct_u0_spectral(const std::function<double(double)>& psi, const OracleConfig& config,
                                               std::size_t modes);

}  // namespace fracback
