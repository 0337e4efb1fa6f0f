#pragma once

#include "sar/types.hpp"

#include <utility>
#include <vector>

namespace sar {

/// Two nearest training poses around a target pose.
struct PoseNeighborhood {
    double theta_a = 0.0; // closer pose
    ComplexImage image_a;
    double theta_b = 0.0;
    ComplexImage image_b;
};

/// Two closest available poses by circular angular distance; the first is
/// the closer one, ties broken toward the smaller angle.
std::pair<double, double> nearest_poses(const std::vector<double>& azimuths_rad, double theta_c);

/// Interpolation weights (w_a, w_b) for synthesizing theta_c between
/// theta_a and theta_b; nonnegative, sum exactly 1.
std::pair<double, double> interp_weights(double theta_a, double theta_b, double theta_c);

/// Naive-rotation baseline: rotate by (theta_c - theta_src) with border crop
/// to the original size.
ComplexImage rotate_pose(const ComplexImage& image, double theta_src, double theta_c,
                         bool magnitude_only = false);

/// Linear-interpolation baseline: de-rotate both neighbors to a common frame,
/// blend with distance weights, re-rotate to the target pose.
ComplexImage linear_interp_pose(const PoseNeighborhood& nbr, double theta_c,
                                bool magnitude_only = false);

} // namespace sar
