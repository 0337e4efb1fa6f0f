#pragma once

// Independent reference implementations used to freeze expected values.
// Everything here evaluates the underlying definitions directly (dense
// matrices, explicit series, coordinate descent) and must stay decoupled
// from the library's computational paths.

#include "sar/geometry.hpp"
#include "sar/phase_history.hpp"
#include "sar/scattering.hpp"
#include "sar/types.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace oracle {

/// Taylor taper by direct evaluation of the coefficient series in long
/// double, peak-normalized. Structured independently of the library version.
std::vector<double> taylor_reference(int n, int nbar, double sll_db);

/// Dense scattering matrix A (N_theta*M x D*K) built by the literal
/// triple-loop formula with std::exp. Column ordering: (k, v) -> k*D + v.
Eigen::MatrixXcd dense_scattering_matrix(const sar::SpatialGrid& spatial,
                                         const sar::GaussianBasisSet& basis,
                                         const sar::PolarGrid& grid);

/// Flattens a phase history row-major into the vector convention of
/// dense_scattering_matrix.
Eigen::VectorXcd flatten_samples(const sar::CMatrix& data);

/// Coefficients in the (k, v) vector convention -> D x K matrix.
sar::CMatrix unflatten_coeffs(const Eigen::VectorXcd& c, int d, int k_total);
Eigen::VectorXcd flatten_coeffs(const sar::CMatrix& coeffs);

struct BcdResult {
    Eigen::VectorXcd coeffs; // (k, v) convention
    double objective = 0.0;
    int sweeps = 0;
};

/// Exact block-coordinate descent on
///   0.5 ||s - A c||^2 + lambda sum_k ||c_k||
/// with per-block minimization through the secular equation
/// mu * ||(G_k + mu I)^-1 b|| = lambda. Independent of the proximal solver.
BcdResult bcd_group_lasso(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& s, int d,
                          double lambda, double rel_tol = 1e-10, int max_sweeps = 20000);

/// Matched test geometry: pixel spacing fixes the band, the carrier is low
/// enough that the annulus fits the pixel Nyquist square.
sar::RadarParams test_params(double spacing_m = 0.3, double fc_hz = 9.3e9,
                             double aperture_deg = 3.0, int pulses = 32);

/// Smooth complex phantom image (Gaussian blobs), deterministic per seed.
sar::ComplexImage smooth_phantom_image(int n, double spacing_m, std::uint64_t seed);

inline std::complex<double> random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

sar::CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

inline double rel_error(const sar::CMatrix& got, const sar::CMatrix& want) {
    return (got - want).norm() / want.norm();
}

} // namespace oracle
