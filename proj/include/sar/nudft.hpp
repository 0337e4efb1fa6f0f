#pragma once

#include "sar/phase_history.hpp"
#include "sar/types.hpp"

#include <vector>

namespace sar {

struct ComplexImage;

/// Flat list of scene sample positions, meters from patch center.
struct ScenePoints {
    std::vector<double> x, y;
    std::size_t size() const { return x.size(); }
};

ScenePoints scene_points(const SpatialGrid& grid);
ScenePoints scene_points(const ComplexImage& img);

/// Non-uniform Fourier sum from scene weights to polar samples:
///   s[i][m] = sum_k w_k exp(-j 4 pi f_m cos(elev)/c *
///                           (x_k cos(theta_i - look) + y_k sin(theta_i - look)))
/// Parallel over azimuth rows; per-row reduction order is fixed.
CMatrix nudft_forward(const CVector& weights, const ScenePoints& pts, const PolarGrid& grid,
                      int jobs = 0);

/// Exact conjugate-transpose of nudft_forward under the standard complex
/// inner product. Parallel over scene points.
CVector nudft_adjoint(const CMatrix& data, const ScenePoints& pts, const PolarGrid& grid,
                      int jobs = 0);

struct CglsOptions {
    double rel_tol = 1e-12; // on the residual norm
    int max_iters = 2000;
    int jobs = 0;
};

struct CglsReport {
    int iterations = 0;
    double rel_residual = 0.0;
};

/// Least-squares inversion of nudft_forward by conjugate gradients on the
/// normal equations. For data consistent with the scene lattice the residual
/// is driven to rounding level.
CVector nudft_invert(const CMatrix& data, const ScenePoints& pts, const PolarGrid& grid,
                     const CglsOptions& opts = {}, CglsReport* report = nullptr);

} // namespace sar
