#pragma once

#include "sar/phase_history.hpp"
#include "sar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sar {

enum class PersistenceProfile { isotropic, gaussian, raised_cosine };

/// Point reflector with an azimuth persistence profile.
struct Scatterer {
    double x_m = 0.0, y_m = 0.0;
    cdouble amplitude{1.0, 0.0};
    PersistenceProfile profile = PersistenceProfile::isotropic;
    double theta0_rad = 0.0; // persistence center
    double width_rad = 0.0;  // persistence width (> 0 unless isotropic)

    cdouble reflectivity(double theta) const;
};

struct SceneDescription {
    std::vector<Scatterer> scatterers;
    double extent_m = 0.0;
    double elevation_rad = 0.0;

    void validate() const;
};

/// Direct evaluation of the received-signal sum over all scatterers; no grid
/// discretization, no approximation.
PhaseHistory simulate_measurements(const SceneDescription& scene, const PolarGrid& grid);

/// Same sum on an arbitrary query grid (extrapolation scoring hook).
PhaseHistory ground_truth_at(const SceneDescription& scene, const std::vector<double>& thetas,
                             const std::vector<double>& freqs, double elevation_rad,
                             double theta_look = 0.0);

/// Adds circular complex white Gaussian noise scaled to the requested SNR.
/// snr_db = +infinity returns the input unchanged; deterministic per seed.
PhaseHistory add_noise(const PhaseHistory& s, double snr_db, std::uint64_t seed);

/// Scene files are JSON documents; angles in degrees.
SceneDescription read_scene(const std::string& path);
void write_scene(const SceneDescription& scene, const std::string& path);
SceneDescription scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const SceneDescription& scene);

} // namespace sar
