#include "fracback/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracback {

SpaceGrid::SpaceGrid(double length, std::size_t intervals)
    : length_(length), intervals_(intervals) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("space grid: length must be positive, got " + std::to_string(length));
    }
    if (intervals < 2) {
        throw std::invalid_argument("space grid: need N >= 2 for at least one interior node");
    }
    spacing_ = length_ / static_cast<double>(intervals_);
    nodes_.resize(intervals_ + 1);
    for (std::size_t i = 0; i <= intervals_; ++i) {
        nodes_[i] = static_cast<double>(i) * spacing_;
    }
    nodes_.back() = length_;
}

TimeMesh::TimeMesh(double final_time, std::size_t levels, double grading)
    : final_time_(final_time), levels_(levels), grading_(grading) {
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw std::invalid_argument("time mesh: T must be positive");
    }
    if (levels < 1) {
        throw std::invalid_argument("time mesh: need M >= 1");
    }
    if (!(grading >= 1.0) || !std::isfinite(grading)) {
        throw std::invalid_argument("time mesh: grading exponent r must be >= 1");
    }

    // Closed formula per node, never accumulated, so t_M == T exactly.
    times_.resize(levels_ + 1);
    const auto m = static_cast<double>(levels_);
    for (std::size_t k = 0; k <= levels_; ++k) {
        times_[k] = final_time_ * std::pow(static_cast<double>(k) / m, grading_);
    }
    times_.front() = 0.0;
    times_.back() = final_time_;

    steps_.resize(levels_);
    for (std::size_t k = 1; k <= levels_; ++k) {
        // Node differences of a uniform mesh wobble by an ulp.
        steps_[k - 1] = grading_ == 1.0 ? final_time_ / m : times_[k] - times_[k - 1];
        if (!(steps_[k - 1] > 0.0)) {
            throw std::invalid_argument("time mesh: grading too strong, step " + std::to_string(k) +
                                        " underflows to zero");
        }
    }
    max_step_ = *std::max_element(steps_.begin(), steps_.end());
}

SpaceGrid build_space_grid(double length, std::size_t intervals) {
    return SpaceGrid(length, intervals);
}

TimeMesh build_graded_time_mesh(double final_time, std::size_t levels, double grading) {
    return TimeMesh(final_time, levels, grading);
}

double default_grading(double alpha) {
    return std::max(1.0, (2.0 - alpha) / alpha);
}

}  // namespace fracback
