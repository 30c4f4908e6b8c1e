#include "fracback/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "fracback/caputo.hpp"
#include "fracback/error.hpp"

namespace fracback {

namespace {

void check_simpson(std::size_t intervals) {
    if (intervals < 2 || intervals % 2 != 0) {
        throw std::invalid_argument("Simpson quadrature needs an even number of intervals");
    }
}

double simpson_weight(std::size_t i, std::size_t intervals) {
    if (i == 0 || i == intervals) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
}

/// Rows k = 1..modes of (2/l) * Simpson weight * sin(k pi x_i / l).
std::vector<double> projection_table(double length, std::size_t modes, std::size_t intervals) {
    const double dx = length / static_cast<double>(intervals);
    std::vector<double> table(modes * (intervals + 1));
    for (std::size_t k = 1; k <= modes; ++k) {
        const double wave = static_cast<double>(k) * std::numbers::pi / length;
        for (std::size_t i = 0; i <= intervals; ++i) {
            const double x = static_cast<double>(i) * dx;
            table[(k - 1) * (intervals + 1) + i] =
                (2.0 / length) * (dx / 3.0) * simpson_weight(i, intervals) * std::sin(wave * x);
        }
    }
    return table;
}

double lambda_of(std::size_t k, double length) {
    const double w = static_cast<double>(k) * std::numbers::pi / length;
    return w * w;
}

}  // namespace

std::vector<double> sine_coefficients_from_samples(std::span<const double> samples, double length,
                                                   std::size_t modes) {
    if (samples.size() < 3) throw std::invalid_argument("sine_coefficients: too few samples");
    const std::size_t intervals = samples.size() - 1;
    check_simpson(intervals);
    const auto table = projection_table(length, modes, intervals);
    std::vector<double> out(modes, 0.0);
    for (std::size_t k = 0; k < modes; ++k) {
        const double* row = table.data() + k * (intervals + 1);
        double s = 0.0;
        for (std::size_t i = 0; i <= intervals; ++i) s += row[i] * samples[i];
        out[k] = s;
    }
    return out;
}

std::vector<double> sine_coefficients(const std::function<double(double)>& v, double length, std::size_t modes,
                                      std::size_t intervals) {
    if (modes < 1) throw std::invalid_argument("sine_coefficients: need at least one mode");
    check_simpson(intervals);
    std::vector<double> samples(intervals + 1);
    const double dx = length / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) samples[i] = v(static_cast<double>(i) * dx);
    return sine_coefficients_from_samples(samples, length, modes);
}

std::vector<double> ModeSolution::trajectory() const {
    std::vector<double> out(homogeneous.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = value(j);
    return out;
}

double gronwall_floor(const TimeFunction& mu, double final_time, std::size_t intervals) {
    check_simpson(intervals);
    const double dt = final_time / static_cast<double>(intervals);
    double integral = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        integral += simpson_weight(i, intervals) / mu(static_cast<double>(i) * dt);
    }
    return std::exp(-integral * dt / 3.0);
}

SpectralOracle::SpectralOracle(OracleConfig config)
    : config_(std::move(config)),
      mesh_(config_.final_time, config_.fine_levels,
            config_.grading > 0.0 ? config_.grading : default_grading(config_.alpha)) {
    if (!(config_.alpha > 0.0 && config_.alpha < 1.0)) {
        throw std::invalid_argument("oracle: alpha must lie in (0,1)");
    }
    if (!config_.mu) throw std::invalid_argument("oracle: mu(t) is not set");
    for (double t : mesh_.times()) {
        if (!(config_.mu(t) > 0.0)) {
            throw std::invalid_argument("oracle: mu(t) must be bounded below by a positive constant");
        }
    }
    check_simpson(config_.quadrature_intervals);
}

std::vector<double> SpectralOracle::forcing_coefficients(std::size_t k) const {
    const std::size_t levels = mesh_.levels();
    std::vector<double> out(levels + 1, 0.0);
    if (!config_.source) return out;
    const std::size_t q = config_.quadrature_intervals;
    const double dx = config_.length / static_cast<double>(q);
    const auto table = projection_table(config_.length, k, q);
    const double* row = table.data() + (k - 1) * (q + 1);
    for (std::size_t j = 0; j <= levels; ++j) {
        const double t = mesh_.time(j);
        double s = 0.0;
        for (std::size_t i = 0; i <= q; ++i) s += row[i] * config_.source(static_cast<double>(i) * dx, t);
        out[j] = s;
    }
    return out;
}

std::vector<ModeSolution> SpectralOracle::solve_lanes(std::span<const std::size_t> modes) const {
    const std::size_t levels = mesh_.levels();
    const std::size_t count = modes.size();
    const std::size_t lanes = 2 * count;  // even lane: A_k, odd lane: B_k
    const double alpha = config_.alpha;
    const double gamma_2ma = gamma_function(2.0 - alpha);

    std::vector<double> lambda(count);
    for (std::size_t m = 0; m < count; ++m) lambda[m] = lambda_of(modes[m], config_.length);

    // f_k(t_j) for every mode, from one source sweep per time level.
    std::vector<double> forcing(count * (levels + 1), 0.0);
    if (config_.source) {
        std::size_t max_mode = 0;
        for (std::size_t k : modes) max_mode = std::max(max_mode, k);
        const std::size_t q = config_.quadrature_intervals;
        const auto table = projection_table(config_.length, max_mode, q);
        const double dx = config_.length / static_cast<double>(q);
        std::vector<double> samples(q + 1);
        for (std::size_t j = 1; j <= levels; ++j) {
            const double t = mesh_.time(j);
            for (std::size_t i = 0; i <= q; ++i) samples[i] = config_.source(static_cast<double>(i) * dx, t);
            for (std::size_t m = 0; m < count; ++m) {
                const double* row = table.data() + (modes[m] - 1) * (q + 1);
                double s = 0.0;
                for (std::size_t i = 0; i <= q; ++i) s += row[i] * samples[i];
                forcing[m * (levels + 1) + j] = s;
            }
        }
    }

    std::vector<double> steps(levels);
    for (std::size_t j = 1; j <= levels; ++j) steps[j - 1] = mesh_.step(j);

    std::vector<double> u((levels + 1) * lanes, 0.0);
    for (std::size_t m = 0; m < count; ++m) u[2 * m] = 1.0;

    std::vector<double> d(levels);
    std::vector<double> hist(lanes);
    for (std::size_t k = 1; k <= levels; ++k) {
        std::span<double> row(d.data(), k);
        l1_row(mesh_.times(), steps, alpha, k, row);

        {
            const double c = row[0] / gamma_2ma;
            for (std::size_t s = 0; s < lanes; ++s) hist[s] = c * u[s];
        }
        for (std::size_t j = 1; j < k; ++j) {
            const double c = (row[j] - row[j - 1]) / gamma_2ma;
            const double* uj = u.data() + j * lanes;
            for (std::size_t s = 0; s < lanes; ++s) hist[s] += c * uj[s];
        }

        const double mu_over_tau = config_.mu(mesh_.time(k)) / steps[k - 1];
        const double leading = row[k - 1] / gamma_2ma;
        const double* prev = u.data() + (k - 1) * lanes;
        double* cur = u.data() + k * lanes;
        for (std::size_t m = 0; m < count; ++m) {
            const double lam = lambda[m];
            const double denom = leading + (1.0 + mu_over_tau) * lam;
            cur[2 * m] = (hist[2 * m] + mu_over_tau * lam * prev[2 * m]) / denom;
            cur[2 * m + 1] =
                (hist[2 * m + 1] + forcing[m * (levels + 1) + k] + mu_over_tau * lam * prev[2 * m + 1]) / denom;
        }
    }

    std::vector<ModeSolution> out(count);
    for (std::size_t m = 0; m < count; ++m) {
        ModeSolution& s = out[m];
        s.k = modes[m];
        s.lambda_k = lambda[m];
        s.homogeneous.resize(levels + 1);
        s.forced.resize(levels + 1);
        for (std::size_t j = 0; j <= levels; ++j) {
            s.homogeneous[j] = u[j * lanes + 2 * m];
            s.forced[j] = u[j * lanes + 2 * m + 1];
        }
        s.A_k_T = s.homogeneous.back();
        s.B_k_T = s.forced.back();
    }
    return out;
}

std::vector<ModeSolution> SpectralOracle::solve_modes(std::size_t count, std::span<const double> u0_coefficients) const {
    if (count < 1) throw std::invalid_argument("oracle: need at least one mode");
    if (!u0_coefficients.empty() && u0_coefficients.size() != count) {
        throw std::invalid_argument("oracle: one initial coefficient per mode expected");
    }
    std::vector<std::size_t> modes(count);
    for (std::size_t k = 1; k <= count; ++k) modes[k - 1] = k;
    auto out = solve_lanes(modes);
    if (!u0_coefficients.empty()) {
        for (std::size_t m = 0; m < count; ++m) out[m].u0_k = u0_coefficients[m];
    }
    return out;
}

ModeSolution SpectralOracle::solve_mode(std::size_t k, double u0_k) const {
    if (k < 1) throw std::invalid_argument("oracle: mode index starts at 1");
    const std::size_t modes[1] = {k};
    ModeSolution s = std::move(solve_lanes(modes).front());
    s.u0_k = u0_k;
    return s;
}

double SpectralOracle::mode_equation_residual(const ModeSolution& mode) const {
    const std::size_t levels = mesh_.levels();
    if (mode.homogeneous.size() != levels + 1) {
        throw std::invalid_argument("oracle residual: mode was solved on a different mesh");
    }
    const double alpha = config_.alpha;
    const double gamma_2ma = gamma_function(2.0 - alpha);
    const auto u = mode.trajectory();
    const auto f = forcing_coefficients(mode.k);
    std::vector<double> steps(levels);
    for (std::size_t j = 1; j <= levels; ++j) steps[j - 1] = mesh_.step(j);

    std::vector<double> d(levels);
    double worst = 0.0;
    for (std::size_t k = 1; k < levels; ++k) {
        std::span<double> row(d.data(), k);
        l1_row(mesh_.times(), steps, alpha, k, row);
        double caputo = 0.0;
        for (std::size_t j = 1; j <= k; ++j) caputo += row[j - 1] * (u[j] - u[j - 1]);
        caputo /= gamma_2ma;

        const double a = steps[k - 1];
        const double b = steps[k];
        const double derivative =
            -b / (a * (a + b)) * u[k - 1] + (b - a) / (a * b) * u[k] + a / (b * (a + b)) * u[k + 1];
        const double r = caputo + config_.mu(mesh_.time(k)) * mode.lambda_k * derivative + mode.lambda_k * u[k] - f[k];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double SpectralOracle::gronwall_floor() const {
    return fracback::gronwall_floor(config_.mu, config_.final_time);
}

ModeSolution solve_mode(std::size_t k, const OracleConfig& config, double u0_k) {
    return SpectralOracle(config).solve_mode(k, u0_k);
}

std::vector<double> SpectralReconstruction::coefficients() const {
    std::vector<double> c(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) c[m] = modes[m].u0_k;
    return c;
}

double SpectralReconstruction::evaluate(double x) const {
    double s = 0.0;
    for (const auto& mode : modes) {
        s += mode.u0_k * std::sin(static_cast<double>(mode.k) * std::numbers::pi * x / length);
    }
    return s;
}

StateVector SpectralReconstruction::sample(const SpaceGrid& grid) const {
    return sample_interior(grid, [this](double x) { return evaluate(x); });
}

SpectralReconstruction reconstruct_u0_spectral(const std::function<double(double)>& psi, const OracleConfig& config,
                                               std::size_t modes) {
    const SpectralOracle oracle(config);
    SpectralReconstruction out;
    out.length = config.length;
    out.psi_k = sine_coefficients(psi, config.length, modes, config.quadrature_intervals);
    out.modes = oracle.solve_modes(modes);
    for (std::size_t m = 0; m < modes; ++m) {
        ModeSolution& s = out.modes[m];
        if (!(s.A_k_T > 0.0)) {
            throw NumericalError("oracle: A_" + std::to_string(s.k) + "(T) = " + std::to_string(s.A_k_T) +
                                 " is not positive; the fine grid is inadequate");
        }
        s.u0_k = (out.psi_k[m] - s.B_k_T) / s.A_k_T;
    }
    return out;
}

}  // namespace fracback
