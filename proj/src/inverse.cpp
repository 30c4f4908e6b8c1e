#include "fracback/inverse.hpp"

#include <bit>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fracback/error.hpp"
#include "fracback/rng.hpp"
#include "parallel.hpp"

namespace fracback {

namespace {

constexpr const char* kCacheMagic = "fracback-operator v1";

std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

OperatorFingerprint OperatorFingerprint::of(const ProblemConfig& config) {
    return OperatorFingerprint{config.alpha,
                               config.grid.intervals(),
                               config.mesh.levels(),
                               config.mesh.grading(),
                               config.mesh.final_time(),
                               config.grid.length(),
                               config.mu_label};
}

std::string OperatorFingerprint::key() const {
    std::ostringstream os;
    os << "alpha=" << format_exact(alpha) << ";N=" << intervals << ";M=" << levels << ";r=" << format_exact(grading)
       << ";T=" << format_exact(final_time) << ";l=" << format_exact(length) << ";mu=" << mu_label;
    return os.str();
}

double NoiseModel::sigma(std::span<const double> psi) const {
    return delta * norm2(psi) / std::sqrt(static_cast<double>(psi.size()));
}

StateVector forced_terminal(const ForwardSolver& solver) {
    const StateVector zero(solver.config().interior(), 0.0);
    return solver.terminal(zero, Forcing::kWithSource);
}

StateVector forced_terminal(const ProblemConfig& config) {
    return forced_terminal(ForwardSolver(config));
}

ForwardOperator assemble_forward_operator(const ForwardSolver& solver, unsigned jobs) {
    const std::size_t n = solver.config().interior();
    ForwardOperator op{DenseMatrix(n, n), OperatorFingerprint::of(solver.config())};
    detail::parallel_for(n, jobs, [&](std::size_t m) {
        StateVector impulse(n, 0.0);
        impulse[m] = 1.0;
        const Trajectory traj = solver.solve(impulse, Forcing::kHomogeneous);
        op.matrix.set_column(m, traj.terminal());
    });
    return op;
}

ForwardOperator assemble_forward_operator(const ProblemConfig& config, unsigned jobs) {
    return assemble_forward_operator(ForwardSolver(config), jobs);
}

void save_forward_operator(const ForwardOperator& op, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open operator cache for writing: " + path.string());
    out << kCacheMagic << '\n' << op.fingerprint.key() << '\n' << op.matrix.rows() << ' ' << op.matrix.cols() << '\n';
    for (double v : op.matrix.data()) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
        out.write(reinterpret_cast<const char*>(bytes), 8);
    }
    if (!out) throw std::runtime_error("failed writing operator cache: " + path.string());
}

ForwardOperator load_forward_operator(const std::filesystem::path& path, const OperatorFingerprint& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open operator cache: " + path.string());
    std::string magic;
    std::string key;
    std::getline(in, magic);
    std::getline(in, key);
    if (magic != kCacheMagic) throw CacheMismatch("not an operator cache: " + path.string());
    if (key != expected.key()) {
        throw CacheMismatch("operator cache fingerprint mismatch: stored '" + key + "', expected '" + expected.key() +
                            "'");
    }
    std::size_t rows = 0;
    std::size_t cols = 0;
    in >> rows >> cols;
    in.get();
    if (rows != expected.intervals - 1 || cols != rows) {
        throw CacheMismatch("operator cache has wrong dimensions");
    }
    ForwardOperator op{DenseMatrix(rows, cols), expected};
    for (double& v : op.matrix.data()) {
        unsigned char bytes[8];
        in.read(reinterpret_cast<char*>(bytes), 8);
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
        v = std::bit_cast<double>(bits);
    }
    if (!in) throw CacheMismatch("operator cache truncated: " + path.string());
    return op;
}

std::vector<double> operator_eigenvalues(const ForwardOperator& op) {
    const std::size_t n = op.matrix.rows();
    const double intervals = static_cast<double>(n + 1);
    std::vector<double> eig(n);
    std::vector<double> s(n);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 1; i <= n; ++i) {
            s[i - 1] = std::sin(std::numbers::pi * static_cast<double>(k * i) / intervals);
        }
        const StateVector fs = op.apply(s);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += fs[i] * s[i];
            den += s[i] * s[i];
        }
        eig[k - 1] = num / den;
    }
    return eig;
}

double operator_condition_number(const ForwardOperator& op) {
    const std::vector<double> eig = operator_eigenvalues(op);
    double lo = INFINITY;
    double hi = 0.0;
    for (double e : eig) {
        lo = std::min(lo, std::abs(e));
        hi = std::max(hi, std::abs(e));
    }
    return hi / lo;
}

StateVector add_noise(std::span<const double> psi, const NoiseModel& model) {
    if (!(model.delta >= 0.0)) {
        throw std::invalid_argument("add_noise: noise level must be nonnegative");
    }
    StateVector out(psi.begin(), psi.end());
    if (model.delta == 0.0) return out;
    const double sigma = model.sigma(psi);
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("add_noise: relative noise needs a nonzero measurement");
    }
    GaussianSource xi(model.seed);
    for (double& v : out) v += sigma * xi.next();
    return out;
}

StateVector tikhonov_reconstruct(const DenseMatrix& f, std::span<const double> data, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("tikhonov_reconstruct: lambda must be positive");
    }
    if (data.size() != f.rows()) {
        throw std::invalid_argument("tikhonov_reconstruct: data length mismatch");
    }
    DenseMatrix normal = f.gram();
    for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += lambda;
    return solve_spd_dense(normal, f.transpose_multiply(data));
}

StateVector tikhonov_reconstruct(const ForwardOperator& f, std::span<const double> data, double lambda) {
    return tikhonov_reconstruct(f.matrix, data, lambda);
}

ErrorPair error_pair(std::span<const double> a, std::span<const double> b, double h) {
    if (a.size() != b.size()) throw std::invalid_argument("error_pair: length mismatch");
    StateVector diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const DiscreteNorms n = discrete_norms(diff, h);
    return ErrorPair{n.inf, n.l2h};
}

ReconstructionResult reconstruct(std::span<const double> psi_measured, const ProblemConfig& config, double lambda,
                                 const ReconstructOptions& options) {
    const std::size_t n = config.interior();
    if (psi_measured.size() != n) {
        throw std::invalid_argument("reconstruct: measurement must hold the " + std::to_string(n) +
                                    " interior samples");
    }
    if (options.reference_u0 && options.reference_u0->size() != n) {
        throw std::invalid_argument("reconstruct: reference initial state has wrong length");
    }
    const ForwardSolver solver(config);
    const double h = config.grid.spacing();

    const StateVector g = forced_terminal(solver);

    ForwardOperator assembled;
    const ForwardOperator* op = options.cached_operator;
    if (op != nullptr && !(op->fingerprint == OperatorFingerprint::of(config))) {
        throw CacheMismatch("reconstruct: cached operator was built for " + op->fingerprint.key());
    }
    if (op == nullptr) {
        assembled = assemble_forward_operator(solver, options.jobs);
        op = &assembled;
    }

    StateVector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = psi_measured[i] - g[i];

    ReconstructionResult result;
    result.lambda = lambda;
    result.u0_hat = tikhonov_reconstruct(*op, d, lambda);
    result.psi_hat = solver.terminal(result.u0_hat, Forcing::kWithSource);
    result.psi_error = error_pair(result.psi_hat, psi_measured, h);
    if (options.reference_u0) {
        result.u0_error = error_pair(result.u0_hat, *options.reference_u0, h);
    }
    for (double v : result.u0_hat) {
        if (!std::isfinite(v)) throw NumericalError("reconstruct: non-finite reconstruction");
    }
    result.condition_number = operator_condition_number(*op);
    return result;
}

}  // namespace fracback
