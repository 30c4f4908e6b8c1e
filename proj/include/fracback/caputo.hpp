#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracback/mesh.hpp"

namespace fracback {

/// Gamma function for z > 0 (Lanczos, g = 7), relative error below 1e-14
/// on the range used here.
double gamma_function(double z);

/// L1 coefficients of one time level k:
///
///   d_{k,j} = ((t_k - t_{j-1})^{1-a} - (t_k - t_j)^{1-a}) / (t_j - t_{j-1}),  j = 1..k
///
/// so that the discrete Caputo derivative is (1/Gamma(2-a)) sum_j d_{k,j} (v_j - v_{j-1}).
/// The weights w_{k,j} = d_{k,j} / Gamma(2-a) are derived on demand.
struct L1Weights {
    std::size_t level = 0;
    double alpha = 0.0;
    double gamma_2ma = 1.0;
    std::vector<double> d;  // d[j-1] == d_{k,j}

    double coefficient(std::size_t j) const { return d[j - 1]; }
    double weight(std::size_t j) const { return d[j - 1] / gamma_2ma; }
};

/// Writes d_{k,1..k} into out (size k). times are t_0..t_M, steps tau_1..tau_M.
/// Shared kernel for the weight table and for callers that stream rows.
void l1_row(std::span<const double> times, std::span<const double> steps, double alpha, std::size_t k,
            std::span<double> out);

L1Weights l1_coefficients(const TimeMesh& mesh, double alpha, std::size_t k);

/// Lower-triangular table of all d_{k,j} for a mesh, plus the derived
/// history coefficients used by the time stepper. Immutable once built.
class L1WeightTable {
public:
    L1WeightTable(const TimeMesh& mesh, double alpha);

    std::size_t levels() const { return levels_; }
    double alpha() const { return alpha_; }
    double gamma_2ma() const { return gamma_2ma_; }

    /// d_{k,1..k}.
    std::span<const double> row(std::size_t k) const;

    /// c_{k,0..k-1} with r^k = sum_j c_{k,j} u^j:
    /// c_{k,0} = d_{k,1}/G, c_{k,j} = (d_{k,j+1} - d_{k,j})/G.
    std::span<const double> history_coefficients(std::size_t k) const;

    /// d_{k,k} / Gamma(2 - alpha), the implicit diagonal contribution.
    double leading(std::size_t k) const { return row(k).back() / gamma_2ma_; }

    L1Weights weights(std::size_t k) const;

private:
    static std::size_t offset(std::size_t k) { return (k - 1) * k / 2; }

    std::size_t levels_;
    double alpha_;
    double gamma_2ma_;
    std::vector<double> d_;
    std::vector<double> history_;
};

/// (1/Gamma(2-a)) sum_{j=1}^k d_{k,j} (v_j - v_{j-1}) for v = v_0..v_k.
double discrete_caputo_scalar(const L1Weights& weights, std::span<const double> values);

/// Memory term r^k = d_{k,1}/G u^0 + (1/G) sum_{j=1}^{k-1} (d_{k,j+1} - d_{k,j}) u^j
/// from the states u^0..u^{k-1}.
std::vector<double> history_term(const L1Weights& weights, std::span<const std::vector<double>> states);

}  // namespace fracback
