#include "sar/scattering.hpp"

#include "sar/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace sar {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double kernel_phase_scale(const PolarGrid& grid) {
    return -4.0 * kPi * std::cos(grid.elevation_rad) / kSpeedOfLight;
}

} // namespace

void GaussianBasisSet::validate() const {
    require(!centers_rad.empty(), "GaussianBasisSet: need at least one center");
    require(std::isfinite(sigma_rad) && sigma_rad > 0.0, "GaussianBasisSet: sigma must be > 0");
    for (std::size_t v = 1; v < centers_rad.size(); ++v)
        require(centers_rad[v] > centers_rad[v - 1], "GaussianBasisSet: centers must ascend");
}

std::vector<double> make_basis_centers(double theta_center, double half_span, int d) {
    require(d >= 1, "make_basis_centers: d must be >= 1");
    require(std::isfinite(theta_center), "make_basis_centers: non-finite center");
    require(std::isfinite(half_span) && half_span > 0.0, "make_basis_centers: half_span must be > 0");
    const double lo = theta_center - half_span;
    const double interval = 2.0 * half_span / static_cast<double>(d);
    std::vector<double> centers(static_cast<std::size_t>(d));
    for (int v = 0; v < d; ++v)
        centers[static_cast<std::size_t>(v)] = lo + (static_cast<double>(v) + 0.5) * interval;
    return centers;
}

RVector gaussian_basis(double theta, const GaussianBasisSet& basis) {
    basis.validate();
    RVector psi(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t v = 0; v < basis.size(); ++v) {
        const double t = (theta - basis.centers_rad[v]) / (2.0 * basis.sigma_rad);
        psi(static_cast<Eigen::Index>(v)) = std::exp(-t * t);
    }
    return psi;
}

RVector gaussian_basis_derivative(double theta, const GaussianBasisSet& basis) {
    basis.validate();
    RVector dpsi(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t v = 0; v < basis.size(); ++v) {
        const double denom = 2.0 * basis.sigma_rad;
        const double t = (theta - basis.centers_rad[v]) / denom;
        dpsi(static_cast<Eigen::Index>(v)) = -2.0 * t / denom * std::exp(-t * t);
    }
    return dpsi;
}

PhaseHistory scattering_forward(const CMatrix& coeffs, const SpatialGrid& spatial,
                                const GaussianBasisSet& basis, const PolarGrid& grid,
                                int jobs) {
    grid.validate();
    basis.validate();
    require(coeffs.rows() == static_cast<Eigen::Index>(basis.size()),
            "scattering_forward: coefficient rows must match basis size");
    require(coeffs.cols() == spatial.num_points(),
            "scattering_forward: coefficient columns must match grid points");

    const ScenePoints pts = scene_points(spatial);
    const auto n_theta = static_cast<Eigen::Index>(grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(grid.num_freqs());
    const std::size_t k_total = pts.size();
    const double beta = kernel_phase_scale(grid);
    const double f0 = grid.freqs.front();
    const double df = grid.freq_spacing();

    CMatrix out = CMatrix::Zero(n_theta, n_freq);
    parallel_for(static_cast<std::size_t>(n_theta), [&](std::size_t i) {
        const double theta_abs = grid.thetas[i];
        const double theta = theta_abs - grid.theta_look;
        const double ct = std::cos(theta), st = std::sin(theta);
        const RVector psi = gaussian_basis(theta_abs, basis);
        cdouble* row = &out(static_cast<Eigen::Index>(i), 0);
        for (std::size_t k = 0; k < k_total; ++k) {
            // per-pulse scene weight g_k(theta_i) = sum_v C(v,k) psi_v(theta_i)
            cdouble w(0.0, 0.0);
            for (Eigen::Index v = 0; v < coeffs.rows(); ++v)
                w += coeffs(v, static_cast<Eigen::Index>(k)) * psi(v);
            if (w == cdouble(0.0, 0.0)) continue;
            const double range = pts.x[k] * ct + pts.y[k] * st;
            cdouble cur = w * std::polar(1.0, beta * f0 * range);
            const cdouble step = std::polar(1.0, beta * df * range);
            for (Eigen::Index m = 0; m < n_freq; ++m) {
                row[m] += cur;
                cur *= step;
            }
        }
    }, jobs);
    return PhaseHistory(std::move(out), grid);
}

CMatrix scattering_adjoint(const PhaseHistory& residual, const SpatialGrid& spatial,
                           const GaussianBasisSet& basis, int jobs) {
    residual.validate();
    basis.validate();
    const PolarGrid& grid = residual.grid;
    const ScenePoints pts = scene_points(spatial);
    const auto n_theta = static_cast<Eigen::Index>(grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(grid.num_freqs());
    const auto d = static_cast<Eigen::Index>(basis.size());
    const double beta = kernel_phase_scale(grid);
    const double f0 = grid.freqs.front();
    const double df = grid.freq_spacing();

    Eigen::MatrixXd psi(n_theta, d);
    std::vector<double> ct(grid.num_pulses()), st(grid.num_pulses());
    for (Eigen::Index i = 0; i < n_theta; ++i) {
        psi.row(i) = gaussian_basis(grid.thetas[static_cast<std::size_t>(i)], basis).transpose();
        ct[static_cast<std::size_t>(i)] = std::cos(grid.thetas[static_cast<std::size_t>(i)] - grid.theta_look);
        st[static_cast<std::size_t>(i)] = std::sin(grid.thetas[static_cast<std::size_t>(i)] - grid.theta_look);
    }

    CMatrix out = CMatrix::Zero(d, static_cast<Eigen::Index>(pts.size()));
    parallel_for(pts.size(), [&](std::size_t k) {
        for (Eigen::Index i = 0; i < n_theta; ++i) {
            const double range = pts.x[k] * ct[static_cast<std::size_t>(i)] +
                                 pts.y[k] * st[static_cast<std::size_t>(i)];
            const cdouble* row = &residual.data(i, 0);
            cdouble acc(0.0, 0.0);
            cdouble cur = std::conj(std::polar(1.0, beta * f0 * range));
            const cdouble step = std::conj(std::polar(1.0, beta * df * range));
            for (Eigen::Index m = 0; m < n_freq; ++m) {
                acc += cur * row[m];
                cur *= step;
            }
            for (Eigen::Index v = 0; v < d; ++v)
                out(v, static_cast<Eigen::Index>(k)) += psi(i, v) * acc;
        }
    }, jobs);
    return out;
}

void ScatteringModel::validate() const {
    basis.validate();
    require(spatial.n_range >= 1, "ScatteringModel: empty spatial grid");
    require(coeffs.rows() == static_cast<Eigen::Index>(basis.size()) &&
                coeffs.cols() == spatial.num_points(),
            "ScatteringModel: coefficient dimensions inconsistent");
    require(coeffs.allFinite(), "ScatteringModel: non-finite coefficients");
    require(freq_count >= 1 && std::isfinite(freq_start_hz), "ScatteringModel: bad frequency axis");
}

PhaseHistory evaluate_model(const ScatteringModel& model, const std::vector<double>& thetas,
                            const std::vector<double>& freqs, int jobs) {
    model.validate();
    if (thetas.empty() || freqs.empty())
        return PhaseHistory(CMatrix::Zero(static_cast<Eigen::Index>(thetas.size()),
                                          static_cast<Eigen::Index>(freqs.size())),
                            PolarGrid{});

    const double span = model.half_span + model.max_extrapolation + 1e-12;
    for (double th : thetas) {
        if (std::abs(th - model.theta_center) > span)
            throw OutOfSpanError("evaluate_model: query azimuth outside modeled span");
    }

    PolarGrid grid;
    grid.thetas = thetas;
    grid.freqs = freqs;
    grid.elevation_rad = model.elevation_rad;
    grid.theta_look = model.theta_look;
    return scattering_forward(model.coeffs, model.spatial, model.basis, grid, jobs);
}

} // namespace sar
