#include "fracback/caputo.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracback {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Below this ratio tau/b the plain difference of powers loses digits to
// cancellation; switch to b^beta * expm1(beta * log1p(tau / b)).
constexpr double kCancellationRatio = 1e-3;

}  // namespace

double gamma_function(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw std::invalid_argument("gamma_function: argument must be positive, got " + std::to_string(z));
    }
    if (z < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_function(1.0 - z));
    }
    const double x = z - 1.0;
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        sum += kLanczosCoeffs[i] / (x + static_cast<double>(i));
    }
    const double t = x + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * sum;
}

void l1_row(std::span<const double> times, std::span<const double> steps, double alpha, std::size_t k,
            std::span<double> out) {
    const double beta = 1.0 - alpha;
    const double tk = times[k];
    // j = k: (t_k - t_{k-1})^{1-a} / tau_k, the t_k - t_k = 0 term contributes exactly 0.
    out[k - 1] = std::pow(steps[k - 1], -alpha);
    double p_right = std::pow(tk - times[k - 1], beta);  // (t_k - t_{j})^{beta} for j = k-1
    for (std::size_t j = k - 1; j >= 1; --j) {
        const double tau = steps[j - 1];
        const double b = tk - times[j];
        const double p_left = std::pow(tk - times[j - 1], beta);
        if (tau < kCancellationRatio * b) {
            out[j - 1] = p_right * std::expm1(beta * std::log1p(tau / b)) / tau;
        } else {
            out[j - 1] = (p_left - p_right) / tau;
        }
        p_right = p_left;
    }
}

L1Weights l1_coefficients(const TimeMesh& mesh, double alpha, std::size_t k) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("l1_coefficients: alpha must lie in (0,1)");
    }
    if (k < 1 || k > mesh.levels()) {
        throw std::invalid_argument("l1_coefficients: level out of range");
    }
    std::vector<double> steps(mesh.levels());
    for (std::size_t j = 1; j <= mesh.levels(); ++j) steps[j - 1] = mesh.step(j);

    L1Weights w;
    w.level = k;
    w.alpha = alpha;
    w.gamma_2ma = gamma_function(2.0 - alpha);
    w.d.resize(k);
    l1_row(mesh.times(), steps, alpha, k, w.d);
    return w;
}

L1WeightTable::L1WeightTable(const TimeMesh& mesh, double alpha)
    : levels_(mesh.levels()), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("L1WeightTable: alpha must lie in (0,1)");
    }
    gamma_2ma_ = gamma_function(2.0 - alpha);
    std::vector<double> steps(levels_);
    for (std::size_t j = 1; j <= levels_; ++j) steps[j - 1] = mesh.step(j);

    const std::size_t total = levels_ * (levels_ + 1) / 2;
    d_.resize(total);
    history_.resize(total);
    for (std::size_t k = 1; k <= levels_; ++k) {
        std::span<double> d_row(d_.data() + offset(k), k);
        l1_row(mesh.times(), steps, alpha, k, d_row);

        std::span<double> h_row(history_.data() + offset(k), k);
        h_row[0] = d_row[0] / gamma_2ma_;
        for (std::size_t j = 1; j < k; ++j) {
            h_row[j] = (d_row[j] - d_row[j - 1]) / gamma_2ma_;
        }
    }
}

std::span<const double> L1WeightTable::row(std::size_t k) const {
    return {d_.data() + offset(k), k};
}

std::span<const double> L1WeightTable::history_coefficients(std::size_t k) const {
    return {history_.data() + offset(k), k};
}

L1Weights L1WeightTable::weights(std::size_t k) const {
    const auto r = row(k);
    return L1Weights{k, alpha_, gamma_2ma_, std::vector<double>(r.begin(), r.end())};
}

double discrete_caputo_scalar(const L1Weights& weights, std::span<const double> values) {
    if (values.size() != weights.level + 1) {
        throw std::invalid_argument("discrete_caputo_scalar: expected " + std::to_string(weights.level + 1) +
                                    " values, got " + std::to_string(values.size()));
    }
    double sum = 0.0;
    for (std::size_t j = 1; j <= weights.level; ++j) {
        sum += weights.d[j - 1] * (values[j] - values[j - 1]);
    }
    return sum / weights.gamma_2ma;
}

std::vector<double> history_term(const L1Weights& weights, std::span<const std::vector<double>> states) {
    const std::size_t k = weights.level;
    if (k < 1 || states.size() < k) {
        throw std::invalid_argument("history_term: need states u^0..u^{k-1}");
    }
    const std::size_t n = states[0].size();
    for (std::size_t j = 0; j < k; ++j) {
        if (states[j].size() != n) {
            throw std::invalid_argument("history_term: state length mismatch at level " + std::to_string(j));
        }
    }
    std::vector<double> r(n);
    const double c0 = weights.d[0] / weights.gamma_2ma;
    for (std::size_t i = 0; i < n; ++i) r[i] = c0 * states[0][i];
    for (std::size_t j = 1; j < k; ++j) {
        const double c = (weights.d[j] - weights.d[j - 1]) / weights.gamma_2ma;
        for (std::size_t i = 0; i < n; ++i) r[i] += c * states[j][i];
    }
    return r;
}

}  // namespace fracback
