#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracback/forward.hpp"
#include "fracback/linalg.hpp"

namespace fracback {

/// Identifies the discretisation a forward operator was built for. Two
/// operators are interchangeable only if every field matches.
struct OperatorFingerprint {
    double alpha = 0.0;
    std::size_t intervals = 0;
    std::size_t levels = 0;
    double grading = 1.0;
    double final_time = 1.0;
    double length = 1.0;
    std::string mu_label;

    static OperatorFingerprint of(const ProblemConfig& config);
    std::string key() const;
    bool operator==(const OperatorFingerprint&) const = default;
};

/// Dense F_h with column m equal to the homogeneous terminal state
/// u^M(e^(m); 0).
struct ForwardOperator {
    DenseMatrix matrix;
    OperatorFingerprint fingerprint;

    StateVector apply(std::span<const double> phi) const { return matrix.multiply(phi); }
};

class CacheMismatch : public std::runtime_error {
public:
    explicit CacheMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Relative Gaussian noise: sigma = delta |psi|_2 / sqrt(N-1).
struct NoiseModel {
    double delta = 0.0;
    std::uint64_t seed = 0;

    double sigma(std::span<const double> psi) const;
};

struct ErrorPair {
    double inf = 0.0;
    double l2h = 0.0;
};

struct ReconstructionResult {
    StateVector u0_hat;
    double lambda = 0.0;
    /// u^M(u0_hat; f), the consistency re-run.
    StateVector psi_hat;
    /// Mismatch of psi_hat against the measurement that was inverted.
    ErrorPair psi_error;
    /// Present only when a reference initial state was supplied.
    std::optional<ErrorPair> u0_error;
    /// cond_2(F_h), recorded for inspection.
    double condition_number = 0.0;
};

/// g_h = u^M(0; f).
StateVector forced_terminal(const ProblemConfig& config);
StateVector forced_terminal(const ForwardSolver& solver);

/// Builds F_h from N-1 impulse responses. Columns are independent and are
/// spread over `jobs` threads (0 = hardware concurrency); the result does
/// not depend on the schedule.
ForwardOperator assemble_forward_operator(const ProblemConfig& config, unsigned jobs = 0);
ForwardOperator assemble_forward_operator(const ForwardSolver& solver, unsigned jobs = 0);

/// Binary cache: a text header carrying the fingerprint key, then the
/// matrix as little-endian doubles, row-major.
void save_forward_operator(const ForwardOperator& op, const std::filesystem::path& path);
/// Throws CacheMismatch when the stored fingerprint differs from `expected`.
ForwardOperator load_forward_operator(const std::filesystem::path& path, const OperatorFingerprint& expected);

/// Eigenvalues of F_h. The discrete sine vectors are exact eigenvectors
/// of L_h and the scheme is a rational function of L_h, so the Rayleigh
/// quotients on them give the spectrum, ordered by mode k = 1..N-1.
std::vector<double> operator_eigenvalues(const ForwardOperator& op);
/// max |eig| / min |eig| of F_h.
double operator_condition_number(const ForwardOperator& op);

/// psi + sigma xi with xi ~ N(0, I) drawn from GaussianSource(seed).
StateVector add_noise(std::span<const double> psi, const NoiseModel& model);

/// Solves (F^T F + lambda I) u = F^T d.
StateVector tikhonov_reconstruct(const DenseMatrix& f, std::span<const double> data, double lambda);
StateVector tikhonov_reconstruct(const ForwardOperator& f, std::span<const double> data, double lambda);

ErrorPair error_pair(std::span<const double> a, std::span<const double> b, double h);

struct ReconstructOptions {
    std::optional<StateVector> reference_u0;
    /// Reused instead of assembling F_h when its fingerprint matches.
    const ForwardOperator* cached_operator = nullptr;
    unsigned jobs = 0;
};

/// Forced term, F_h, d_h = psi - g_h, normal equations, then a forward
/// re-run from the reconstruction for the consistency metrics.
ReconstructionResult reconstruct(std::span<const double> psi_measured, const ProblemConfig& config, double lambda,
                                 const ReconstructOptions& options = {});

}  // namespace fracback
