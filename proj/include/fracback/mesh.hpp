#pragma once

#include <cstddef>
#include <vector>

namespace fracback {

/// Uniform grid on [0, l] with N subintervals. Only the N-1 interior nodes
/// carry unknowns; the Dirichlet boundary values are implicit zeros.
class SpaceGrid {
public:
    SpaceGrid(double length, std::size_t intervals);

    double length() const { return length_; }
    std::size_t intervals() const { return intervals_; }
    std::size_t interior_count() const { return intervals_ - 1; }
    double spacing() const { return spacing_; }

    /// Node coordinates x_0..x_N.
    const std::vector<double>& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }

private:
    double length_;
    std::size_t intervals_;
    double spacing_;
    std::vector<double> nodes_;
};

/// Graded temporal mesh t_k = T (k/M)^r. r = 1 gives the uniform mesh.
class TimeMesh {
public:
    TimeMesh(double final_time, std::size_t levels, double grading);

    double final_time() const { return final_time_; }
    std::size_t levels() const { return levels_; }
    double grading() const { return grading_; }

    /// t_0..t_M.
    const std::vector<double>& times() const { return times_; }
    double time(std::size_t k) const { return times_[k]; }

    /// Step size tau_k = t_k - t_{k-1}, valid for 1 <= k <= M.
    double step(std::size_t k) const { return steps_[k - 1]; }
    double max_step() const { return max_step_; }

private:
    double final_time_;
    std::size_t levels_;
    double grading_;
    std::vector<double> times_;
    std::vector<double> steps_;
    double max_step_;
};

SpaceGrid build_space_grid(double length, std::size_t intervals);
TimeMesh build_graded_time_mesh(double final_time, std::size_t levels, double grading);

/// Grading exponent max(1, (2 - alpha) / alpha) that restores the optimal
/// L1 rate for solutions with a t^alpha initial layer.
double default_grading(double alpha);

}  // namespace fracback
