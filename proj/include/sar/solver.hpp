#pragma once

#include "sar/scattering.hpp"

#include <stdexcept>
#include <vector>

namespace sar {

enum class StepRule { power_iteration, backtracking };

struct SolverOptions {
    double lambda = 0.0; // group-sparsity weight, >= 0
    int max_iters = 2000;
    double rel_tol = 1e-6; // on relative objective change
    StepRule step_rule = StepRule::power_iteration;
    bool restart = true;
    int jobs = 0;
    double lipschitz_override = 0.0; // > 0 skips the power iteration (testing hook)
    void validate() const;
};

struct FitResult {
    CMatrix coeffs;
    std::vector<double> objective_trace;
    double residual_fro = 0.0;
    double sigma_g = 0.0;
    double lambda = 0.0;
    double lipschitz = 0.0; // squared operator norm used for the step
    int iterations = 0;
    bool converged = false;
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Proximal map of tau * ||.||_2: scales the group toward zero, exactly zero
/// inside the tau-ball.
CVector block_soft_threshold(const CVector& group, double tau);

/// Largest squared singular value of the scattering operator by power
/// iteration on A*A. Deterministic start; stops at 1e-4 relative change or
/// 200 iterations.
double lipschitz_estimate(const SpatialGrid& spatial, const GaussianBasisSet& basis,
                          const PolarGrid& grid, int jobs = 0);

/// max_k ||(A* S)_k||_2; the null-solution threshold of the group penalty.
double lambda_max(const PhaseHistory& s, const SpatialGrid& spatial,
                  const GaussianBasisSet& basis, int jobs = 0);

/// Minimizes 0.5 ||S - A(C)||_F^2 + lambda sum_k ||c_k||_2 by accelerated
/// proximal gradient with monotone restart.
FitResult fit_coefficients(const PhaseHistory& s, const SpatialGrid& spatial,
                           const GaussianBasisSet& basis, const SolverOptions& opts);

struct SigmaSelection {
    double sigma_rad = 0.0;
    FitResult fit;
    GaussianBasisSet basis;
};

/// Line search over kernel widths: fits every candidate and keeps the one
/// with the smallest converged objective, ties toward the smaller width.
SigmaSelection select_sigma(const PhaseHistory& s, const SpatialGrid& spatial,
                            const std::vector<double>& centers_rad,
                            const std::vector<double>& sigma_candidates,
                            const SolverOptions& opts);

/// Default width candidates: log-spaced between the azimuth sample spacing
/// and the aperture half-width.
std::vector<double> default_sigma_candidates(const PolarGrid& grid, int count = 8);

} // namespace sar
