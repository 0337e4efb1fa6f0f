#pragma once

#include "sar/nudft.hpp"
#include "sar/phase_history.hpp"
#include "sar/types.hpp"

#include <vector>

namespace sar {

/// Gaussian interpolation kernels over azimuth: psi_v(theta) =
/// exp(-((theta - center_v) / (2 sigma))^2).
struct GaussianBasisSet {
    std::vector<double> centers_rad; // ascending, uniformly spaced
    double sigma_rad = 0.0;

    std::size_t size() const { return centers_rad.size(); }
    void validate() const;
};

/// Midpoints of [theta_center - half_span, theta_center + half_span] split
/// into d equal intervals.
std::vector<double> make_basis_centers(double theta_center, double half_span, int d);

/// psi_v(theta) for all v.
RVector gaussian_basis(double theta, const GaussianBasisSet& basis);

/// d/dtheta psi_v(theta) for all v (used by continuity checks).
RVector gaussian_basis_derivative(double theta, const GaussianBasisSet& basis);

/// Phase history synthesized from per-point coefficient groups:
///   s[i][m] = sum_k (sum_v C(v,k) psi_v(theta_i)) * kernel(f_m, theta_i, x_k, y_k).
/// Matrix-free; column k of C is the group for grid point k.
PhaseHistory scattering_forward(const CMatrix& coeffs, const SpatialGrid& spatial,
                                const GaussianBasisSet& basis, const PolarGrid& grid,
                                int jobs = 0);

/// Exact adjoint of scattering_forward under the complex inner product
/// <A, B> = sum conj(B) .* A.
CMatrix scattering_adjoint(const PhaseHistory& residual, const SpatialGrid& spatial,
                           const GaussianBasisSet& basis, int jobs = 0);

struct FitMetadata {
    double lambda = 0.0;
    std::vector<double> objective_trace;
    double residual_fro = 0.0;
    bool converged = false;
};

/// Fitted limited-persistence scattering model for one chip.
struct ScatteringModel {
    SpatialGrid spatial;
    GaussianBasisSet basis;
    CMatrix coeffs; // D x K
    double elevation_rad = 0.0;
    double theta_center = 0.0;          // azimuth the chip was fitted at
    double half_span = 0.0;             // half-width of the training aperture
    double max_extrapolation = 0.0;     // admissible |theta - theta_center| - half_span
    double theta_look = 0.0;            // look frame of the fitted scene coordinates
    double freq_start_hz = 0.0, freq_step_hz = 0.0;
    int freq_count = 0;
    int pulses = 0;
    FitMetadata meta;

    double sigma_g() const { return basis.sigma_rad; }
    void validate() const;
};

/// Evaluates the fitted model on an arbitrary query grid. Queries outside
/// [theta_center - half_span - max_extrapolation, ... + ...] raise
/// OutOfSpanError. On the training grid this reproduces scattering_forward
/// bit for bit.
PhaseHistory evaluate_model(const ScatteringModel& model, const std::vector<double>& thetas,
                            const std::vector<double>& freqs, int jobs = 0);

struct OutOfSpanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sar
