#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sar {

inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Collection parameters of one spotlight chip. Angles are radians; degrees
/// appear only at CLI/file boundaries.
struct RadarParams {
    double center_frequency_hz = 0.0;
    double bandwidth_hz = 0.0;
    double elevation_rad = 0.0;      // grazing/depression angle of the platform
    double aperture_width_rad = 0.0; // azimuth span of one chip
    int pulses_per_aperture = 0;     // N_theta

    void validate() const;
};

/// Azimuth x frequency measurement grid. `theta_look` is the reference look
/// direction subtracted inside the spatial-frequency map; it defaults to the
/// aperture center so formed images are look-aligned.
struct PolarGrid {
    std::vector<double> thetas; // radians, strictly ascending
    std::vector<double> freqs;  // Hz, strictly ascending
    double elevation_rad = 0.0;
    double theta_look = 0.0;

    std::size_t num_pulses() const { return thetas.size(); }
    std::size_t num_freqs() const { return freqs.size(); }
    double theta_center() const { return 0.5 * (thetas.front() + thetas.back()); }
    double theta_spacing() const;
    double freq_spacing() const;
    void validate() const;
};

/// Square scene grid centered on the target, cell-centered coordinates:
/// coordinate(i) = (i - (n_range-1)/2) * spacing.
struct SpatialGrid {
    double extent_m = 0.0; // L, side of the square patch
    int n_range = 0;       // N_R cells per axis
    double spacing_m = 0.0;

    int num_points() const { return n_range * n_range; }
    double coordinate(int i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(n_range - 1)) * spacing_m;
    }
    // k = row * n_range + col; col -> x, row -> y
    std::pair<double, double> point(int k) const {
        return {coordinate(k % n_range), coordinate(k / n_range)};
    }
    int index_of(double x, double y) const;
};

/// Uniform polar grid: N_theta pulses over the aperture centered at
/// `theta_center`, M = round(2*B*extent/c) frequencies over [fc-B/2, fc+B/2].
PolarGrid make_polar_grid(const RadarParams& params, double extent_m, double theta_center = 0.0);

/// Scene grid with N_R = round(2*B*L/c) range bins per axis.
SpatialGrid make_spatial_grid(const RadarParams& params, double extent_m);

/// Evenly spaced samples including both endpoints (n >= 2), or {center} for n = 1.
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace sar
