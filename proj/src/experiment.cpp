#include "fracback/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "fracback/caputo.hpp"
#include "parallel.hpp"

namespace fracback {

namespace {

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

double ManufacturedCase::exact(double x, double t) const {
    return (1.0 + std::pow(t, alpha + 1.0)) * std::sin(std::numbers::pi * x / length);
}

double ManufacturedCase::source(double x, double t) const {
    const double w2 = (std::numbers::pi / length) * (std::numbers::pi / length);
    const double amplitude = gamma_function(alpha + 2.0) * t + w2 * (1.0 + std::pow(t, alpha + 1.0)) +
                             mu(t) * w2 * (alpha + 1.0) * std::pow(t, alpha);
    return amplitude * std::sin(std::numbers::pi * x / length);
}

ProblemConfig ManufacturedCase::problem(std::size_t intervals, std::size_t levels, double grading) const {
    ProblemConfig cfg;
    cfg.alpha = alpha;
    cfg.grid = SpaceGrid(length, intervals);
    cfg.mesh = TimeMesh(final_time, levels, grading);
    cfg.mu = &ManufacturedCase::mu;
    const ManufacturedCase copy = *this;
    cfg.source = [copy](double x, double t) { return copy.source(x, t); };
    cfg.mu_label = kMuLabel;
    return cfg;
}

OracleConfig ManufacturedCase::oracle(std::size_t fine_levels, double grading) const {
    OracleConfig cfg;
    cfg.alpha = alpha;
    cfg.length = length;
    cfg.final_time = final_time;
    cfg.mu = &ManufacturedCase::mu;
    const ManufacturedCase copy = *this;
    cfg.source = [copy](double x, double t) { return copy.source(x, t); };
    cfg.fine_levels = fine_levels;
    cfg.grading = grading;
    return cfg;
}

double ManufacturedCase::pde_residual(std::size_t fine_levels) const {
    const TimeMesh mesh(final_time, fine_levels, default_grading(alpha));
    const double x = 0.5 * length;
    const double w2 = (std::numbers::pi / length) * (std::numbers::pi / length);
    const double gamma_2ma = gamma_function(2.0 - alpha);

    std::vector<double> u(fine_levels + 1);
    for (std::size_t j = 0; j <= fine_levels; ++j) u[j] = exact(x, mesh.time(j));
    std::vector<double> steps(fine_levels);
    for (std::size_t j = 1; j <= fine_levels; ++j) steps[j - 1] = mesh.step(j);

    std::vector<double> d(fine_levels);
    double worst = 0.0;
    for (std::size_t k = 1; k <= fine_levels; ++k) {
        const double t = mesh.time(k);
        std::span<double> row(d.data(), k);
        l1_row(mesh.times(), steps, alpha, k, row);
        double caputo = 0.0;
        for (std::size_t j = 1; j <= k; ++j) caputo += row[j - 1] * (u[j] - u[j - 1]);
        caputo /= gamma_2ma;
        const double s = std::sin(std::numbers::pi * x / length);
        const double u_xx = -w2 * u[k];
        const double u_xxt = -w2 * (alpha + 1.0) * std::pow(t, alpha) * s;
        worst = std::max(worst, std::abs(caputo - u_xx - mu(t) * u_xxt - source(x, t)));
    }
    return worst;
}

namespace {

ErrorReport run_cell_with(const ManufacturedCase& mc, const ForwardSolver& solver, const ForwardOperator& op,
                          double lambda, double delta, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const ProblemConfig& cfg = solver.config();
    const double h = cfg.grid.spacing();
    const StateVector psi = sample_interior(cfg.grid, [&](double x) { return mc.psi(x); });
    const StateVector u0 = sample_interior(cfg.grid, [&](double x) { return mc.u0(x); });
    const StateVector measured = add_noise(psi, NoiseModel{delta, seed});

    const StateVector g = forced_terminal(solver);
    StateVector d(psi.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = measured[i] - g[i];
    const StateVector u0_hat = tikhonov_reconstruct(op, d, lambda);
    const StateVector psi_hat = solver.terminal(u0_hat);

    const ErrorPair e_u0 = error_pair(u0_hat, u0, h);
    const ErrorPair e_psi = error_pair(psi_hat, measured, h);
    const ErrorPair e_clean = error_pair(psi_hat, psi, h);

    ErrorReport rep;
    rep.alpha = cfg.alpha;
    rep.N = cfg.grid.intervals();
    rep.M = cfg.mesh.levels();
    rep.r = cfg.mesh.grading();
    rep.lambda = lambda;
    rep.delta = delta;
    rep.seed = seed;
    rep.e_u0_inf = e_u0.inf;
    rep.e_u0_2 = e_u0.l2h;
    rep.e_psi_inf = e_psi.inf;
    rep.e_psi_2 = e_psi.l2h;
    rep.e_psi_clean_inf = e_clean.inf;
    rep.e_psi_clean_2 = e_clean.l2h;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

/// All deltas of one (alpha, N, M, r) share the solver and F_h.
std::vector<ErrorReport> run_group(const ManufacturedCase& mc, std::size_t N, std::size_t M, double r, double lambda,
                                   std::span<const double> deltas, std::uint64_t seed, unsigned jobs) {
    const auto start = std::chrono::steady_clock::now();
    const ForwardSolver solver(mc.problem(N, M, r));
    const ForwardOperator op = assemble_forward_operator(solver, jobs);
    const double assembly = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<ErrorReport> out;
    for (double delta : deltas) {
        out.push_back(run_cell_with(mc, solver, op, lambda, delta, seed));
        out.back().wall_seconds += assembly;
    }
    return out;
}

struct GroupKey {
    double alpha;
    std::size_t N;
    std::size_t M;
};

std::vector<ErrorReport> run_groups(std::span<const GroupKey> keys, std::span<const double> deltas, double lambda,
                                    std::uint64_t seed, const MeshPolicy& policy, unsigned jobs) {
    // Cells run concurrently when there are several workers; each cell then
    // assembles its operator single-threaded.
    const unsigned workers = detail::resolve_jobs(jobs);
    const unsigned inner = keys.size() >= workers ? 1u : workers;

    std::vector<std::vector<ErrorReport>> results(keys.size());
    detail::parallel_for(keys.size(), workers, [&](std::size_t i) {
        const ManufacturedCase mc{keys[i].alpha, 1.0, 1.0};
        const double r = policy.grading ? *policy.grading : default_grading(mc.alpha);
        auto rows = run_group(mc, keys[i].N, keys[i].M, r, lambda, deltas, seed, inner);
        if (!policy.grading && policy.uniform_companion && r != 1.0) {
            auto uniform = run_group(mc, keys[i].N, keys[i].M, 1.0, lambda, deltas, seed, inner);
            std::vector<ErrorReport> merged;
            for (std::size_t d = 0; d < rows.size(); ++d) {
                merged.push_back(rows[d]);
                if (relative_gap(rows[d].e_u0_inf, uniform[d].e_u0_inf) > policy.companion_tolerance ||
                    relative_gap(rows[d].e_u0_2, uniform[d].e_u0_2) > policy.companion_tolerance) {
                    merged.push_back(uniform[d]);
                }
            }
            rows = std::move(merged);
        }
        results[i] = std::move(rows);
    });

    std::vector<ErrorReport> out;
    for (auto& group : results) {
        for (auto& row : group) out.push_back(row);
    }
    return out;
}

}  // namespace

ErrorReport run_cell(const ManufacturedCase& mc, std::size_t N, std::size_t M, double r, double lambda, double delta,
                     std::uint64_t seed, unsigned jobs) {
    const double deltas[1] = {delta};
    return run_group(mc, N, M, r, lambda, deltas, seed, jobs).front();
}

std::vector<ErrorReport> run_table1(std::span<const double> alphas, std::span<const std::size_t> grids, double lambda,
                                    const MeshPolicy& policy, unsigned jobs) {
    std::vector<GroupKey> keys;
    for (double a : alphas) {
        for (std::size_t n : grids) keys.push_back({a, n, n});
    }
    const double deltas[1] = {0.0};
    return run_groups(keys, deltas, lambda, 0, policy, jobs);
}

std::vector<ErrorReport> run_table2(std::span<const double> alphas, std::span<const double> deltas, std::size_t N,
                                    std::size_t M, double lambda, std::uint64_t seed, const MeshPolicy& policy,
                                    unsigned jobs) {
    for (double d : deltas) {
        if (!(d >= 0.0)) throw std::invalid_argument("table2: noise levels must be nonnegative");
    }
    std::vector<GroupKey> keys;
    for (double a : alphas) keys.push_back({a, N, M});
    return run_groups(keys, deltas, lambda, seed, policy, jobs);
}

bool OracleCheck::all_positive() const {
    for (const auto& row : rows) {
        if (!(row.A_k_T > 0.0)) return false;
    }
    return true;
}

OracleCheck run_oracle_check(const ManufacturedCase& mc, std::size_t modes, std::size_t fine_M, std::size_t N,
                             std::size_t M, double r, double lambda, unsigned jobs) {
    OracleCheck out;
    out.alpha = mc.alpha;
    out.length = mc.length;
    out.final_time = mc.final_time;
    out.fine_M = fine_M;
    out.modes = modes;
    out.N = N;
    out.M = M;
    out.r = r;
    out.lambda = lambda;

    const OracleConfig ocfg = mc.oracle(fine_M);
    out.gronwall_floor = gronwall_floor(ocfg.mu, ocfg.final_time);

    // The check reports non-positive A_k(T) instead of throwing, so solve
    // the modes directly rather than through reconstruct_u0_spectral.
    const SpectralOracle oracle(ocfg);
    const auto psi_k = sine_coefficients([&](double x) { return mc.psi(x); }, mc.length, modes,
                                         ocfg.quadrature_intervals);
    auto solved = oracle.solve_modes(modes);

    const ProblemConfig cfg = mc.problem(N, M, r);
    const StateVector psi = sample_interior(cfg.grid, [&](double x) { return mc.psi(x); });
    ReconstructOptions opts;
    opts.jobs = jobs;
    const ReconstructionResult fd = reconstruct(psi, cfg, lambda, opts);

    SpectralReconstruction spectral;
    spectral.length = mc.length;
    spectral.psi_k = psi_k;
    for (std::size_t m = 0; m < modes; ++m) {
        ModeSolution& s = solved[m];
        s.u0_k = s.A_k_T > 0.0 ? (psi_k[m] - s.B_k_T) / s.A_k_T : std::nan("");

        OracleModeRow row;
        row.k = s.k;
        row.lambda_k = s.lambda_k;
        row.A_k_T = s.A_k_T;
        row.B_k_T = s.B_k_T;
        row.u0_k_oracle = s.u0_k;
        // Discrete sine transform of the FD reconstruction.
        double c = 0.0;
        for (std::size_t i = 1; i < N; ++i) {
            c += fd.u0_hat[i - 1] *
                 std::sin(static_cast<double>(s.k) * std::numbers::pi * static_cast<double>(i) / static_cast<double>(N));
        }
        row.u0_k_fd = 2.0 * c / static_cast<double>(N);
        out.rows.push_back(row);
    }
    spectral.modes = std::move(solved);

    if (out.all_positive()) {
        const StateVector u_spec = spectral.sample(cfg.grid);
        const ErrorPair gap = error_pair(fd.u0_hat, u_spec, cfg.grid.spacing());
        out.relative_gap_l2h = gap.l2h / discrete_norms(u_spec, cfg.grid.spacing()).l2h;
    } else {
        out.relative_gap_l2h = std::nan("");
    }
    return out;
}

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_table1_csv(std::ostream& os, std::span<const ErrorReport> rows) {
    os << "alpha,N,M,r,lambda,E_u0_inf,E_u0_2,E_psi_inf,E_psi_2\n";
    for (const auto& r : rows) {
        os << format_param(r.alpha) << ',' << r.N << ',' << r.M << ',' << format_param(r.r) << ','
           << format_param(r.lambda) << ',' << format_sci(r.e_u0_inf) << ',' << format_sci(r.e_u0_2) << ','
           << format_sci(r.e_psi_inf) << ',' << format_sci(r.e_psi_2) << '\n';
    }
}

void write_table2_csv(std::ostream& os, std::span<const ErrorReport> rows) {
    os << "alpha,N,M,r,lambda,delta,seed,E_u0_inf,E_u0_2,E_psi_inf,E_psi_2,E_psi_clean_inf,E_psi_clean_2\n";
    for (const auto& r : rows) {
        os << format_param(r.alpha) << ',' << r.N << ',' << r.M << ',' << format_param(r.r) << ','
           << format_param(r.lambda) << ',' << format_param(r.delta) << ',' << r.seed << ','
           << format_sci(r.e_u0_inf) << ',' << format_sci(r.e_u0_2) << ',' << format_sci(r.e_psi_inf) << ','
           << format_sci(r.e_psi_2) << ',' << format_sci(r.e_psi_clean_inf) << ',' << format_sci(r.e_psi_clean_2)
           << '\n';
    }
}

void write_oracle_csv(std::ostream& os, const OracleCheck& c) {
    os << "alpha,l,T,fine_M,K,N,M,r,lambda,k,lambda_k,A_k_T,B_k_T,gronwall_floor,u0_k_oracle,u0_k_fd,abs_gap,"
          "rel_gap_l2h\n";
    for (const auto& row : c.rows) {
        os << format_param(c.alpha) << ',' << format_param(c.length) << ',' << format_param(c.final_time) << ','
           << c.fine_M << ',' << c.modes << ',' << c.N << ',' << c.M << ',' << format_param(c.r) << ','
           << format_param(c.lambda) << ',' << row.k << ',' << format_sci(row.lambda_k) << ','
           << format_sci(row.A_k_T) << ',' << format_sci(row.B_k_T) << ',' << format_sci(c.gronwall_floor) << ','
           << format_sci(row.u0_k_oracle) << ',' << format_sci(row.u0_k_fd) << ','
           << format_sci(std::abs(row.u0_k_oracle - row.u0_k_fd)) << ',' << format_sci(c.relative_gap_l2h) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const ProblemConfig& config, const Trajectory& trajectory) {
    const std::size_t N = config.grid.intervals();
    os << 't';
    for (std::size_t i = 0; i <= N; ++i) os << ",x" << i;
    os << '\n';
    for (std::size_t k = 0; k <= trajectory.levels(); ++k) {
        os << format_sci(config.mesh.time(k)) << ',' << format_sci(0.0);
        for (double v : trajectory.state(k)) os << ',' << format_sci(v);
        os << ',' << format_sci(0.0) << '\n';
    }
}

}  // namespace fracback
