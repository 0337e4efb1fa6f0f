#include "sar/geometry.hpp"

#include <cmath>

namespace sar {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

void RadarParams::validate() const {
    require(finite_positive(center_frequency_hz), "RadarParams: center frequency must be finite and > 0");
    require(finite_positive(bandwidth_hz), "RadarParams: bandwidth must be finite and > 0");
    require(std::isfinite(elevation_rad) && elevation_rad >= 0.0 && elevation_rad < kPi / 2.0,
            "RadarParams: elevation must lie in [0, pi/2)");
    require(finite_positive(aperture_width_rad), "RadarParams: aperture width must be finite and > 0");
    require(pulses_per_aperture >= 2, "RadarParams: need at least 2 pulses per aperture");
}

double PolarGrid::theta_spacing() const {
    if (thetas.size() < 2) return 0.0;
    return (thetas.back() - thetas.front()) / static_cast<double>(thetas.size() - 1);
}

double PolarGrid::freq_spacing() const {
    if (freqs.size() < 2) return 0.0;
    return (freqs.back() - freqs.front()) / static_cast<double>(freqs.size() - 1);
}

void PolarGrid::validate() const {
    require(!thetas.empty() && !freqs.empty(), "PolarGrid: empty axis");
    for (std::size_t i = 1; i < thetas.size(); ++i)
        require(thetas[i] > thetas[i - 1], "PolarGrid: thetas must be strictly ascending");
    for (std::size_t i = 1; i < freqs.size(); ++i)
        require(freqs[i] > freqs[i - 1], "PolarGrid: freqs must be strictly ascending");
    require(std::isfinite(elevation_rad) && elevation_rad >= 0.0 && elevation_rad < kPi / 2.0,
            "PolarGrid: elevation must lie in [0, pi/2)");
}

int SpatialGrid::index_of(double x, double y) const {
    const double half = 0.5 * static_cast<double>(n_range - 1);
    auto clamp_cell = [&](double v) {
        int i = static_cast<int>(std::lround(v / spacing_m + half));
        if (i < 0) i = 0;
        if (i >= n_range) i = n_range - 1;
        return i;
    };
    return clamp_cell(y) * n_range + clamp_cell(x);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = 0.5 * (lo + hi);
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    if (n > 1) out[n - 1] = hi; // avoid cumulative rounding at the endpoint
    return out;
}

PolarGrid make_polar_grid(const RadarParams& params, double extent_m, double theta_center) {
    params.validate();
    require(finite_positive(extent_m), "make_polar_grid: extent must be finite and > 0");
    require(std::isfinite(theta_center), "make_polar_grid: theta_center must be finite");

    const auto m = static_cast<std::size_t>(
        std::lround(2.0 * params.bandwidth_hz * extent_m / kSpeedOfLight));
    require(m >= 1, "make_polar_grid: 2*B*L/c rounds to zero frequency samples");

    PolarGrid grid;
    const double half_width = 0.5 * params.aperture_width_rad;
    grid.thetas = linspace(theta_center - half_width, theta_center + half_width,
                           static_cast<std::size_t>(params.pulses_per_aperture));
    grid.freqs = linspace(params.center_frequency_hz - 0.5 * params.bandwidth_hz,
                          params.center_frequency_hz + 0.5 * params.bandwidth_hz, m);
    grid.elevation_rad = params.elevation_rad;
    grid.theta_look = theta_center;
    grid.validate();
    return grid;
}

SpatialGrid make_spatial_grid(const RadarParams& params, double extent_m) {
    params.validate();
    require(finite_positive(extent_m), "make_spatial_grid: extent must be finite and > 0");

    const int n = static_cast<int>(std::lround(2.0 * params.bandwidth_hz * extent_m / kSpeedOfLight));
    require(n >= 1, "make_spatial_grid: 2*B*L/c rounds to zero range bins");

    SpatialGrid grid;
    grid.extent_m = extent_m;
    grid.n_range = n;
    grid.spacing_m = extent_m / static_cast<double>(n);
    return grid;
}

} // namespace sar
