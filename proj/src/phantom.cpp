#include "sar/phantom.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace sar {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

PhaseHistory evaluate_scene(const SceneDescription& scene, const PolarGrid& grid) {
    const auto n_theta = static_cast<Eigen::Index>(grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(grid.num_freqs());
    const double beta = -4.0 * kPi * std::cos(grid.elevation_rad) / kSpeedOfLight;

    CMatrix out = CMatrix::Zero(n_theta, n_freq);
    for (Eigen::Index i = 0; i < n_theta; ++i) {
        const double theta_abs = grid.thetas[static_cast<std::size_t>(i)];
        const double theta = theta_abs - grid.theta_look;
        const double ct = std::cos(theta), st = std::sin(theta);
        for (const Scatterer& sc : scene.scatterers) {
            const cdouble h = sc.reflectivity(theta_abs);
            if (h == cdouble(0.0, 0.0)) continue;
            const double range = sc.x_m * ct + sc.y_m * st;
            for (Eigen::Index m = 0; m < n_freq; ++m) {
                const double phase = beta * grid.freqs[static_cast<std::size_t>(m)] * range;
                out(i, m) += h * std::polar(1.0, phase);
            }
        }
    }
    return PhaseHistory(std::move(out), grid);
}

} // namespace

cdouble Scatterer::reflectivity(double theta) const {
    switch (profile) {
        case PersistenceProfile::isotropic:
            return amplitude;
        case PersistenceProfile::gaussian: {
            const double t = (theta - theta0_rad) / (2.0 * width_rad);
            return amplitude * std::exp(-t * t);
        }
        case PersistenceProfile::raised_cosine: {
            const double d = theta - theta0_rad;
            if (std::abs(d) >= width_rad) return cdouble(0.0, 0.0);
            return amplitude * 0.5 * (1.0 + std::cos(kPi * d / width_rad));
        }
    }
    return cdouble(0.0, 0.0);
}

void SceneDescription::validate() const {
    require(std::isfinite(extent_m) && extent_m > 0.0, "SceneDescription: extent must be > 0");
    for (const Scatterer& sc : scatterers) {
        require(std::abs(sc.x_m) <= 0.5 * extent_m && std::abs(sc.y_m) <= 0.5 * extent_m,
                "SceneDescription: scatterer outside patch");
        if (sc.profile != PersistenceProfile::isotropic)
            require(sc.width_rad > 0.0, "SceneDescription: persistence width must be > 0");
    }
}

PhaseHistory simulate_measurements(const SceneDescription& scene, const PolarGrid& grid) {
    scene.validate();
    grid.validate();
    return evaluate_scene(scene, grid);
}

PhaseHistory ground_truth_at(const SceneDescription& scene, const std::vector<double>& thetas,
                             const std::vector<double>& freqs, double elevation_rad,
                             double theta_look) {
    scene.validate();
    if (thetas.empty() || freqs.empty())
        return PhaseHistory(CMatrix::Zero(static_cast<Eigen::Index>(thetas.size()),
                                          static_cast<Eigen::Index>(freqs.size())),
                            PolarGrid{});
    PolarGrid grid;
    grid.thetas = thetas;
    grid.freqs = freqs;
    grid.elevation_rad = elevation_rad;
    grid.theta_look = theta_look;
    return evaluate_scene(scene, grid);
}

PhaseHistory add_noise(const PhaseHistory& s, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return s;
    require(std::isfinite(snr_db), "add_noise: snr must be finite or +inf");
    const double signal_norm = s.data.norm();
    require(signal_norm > 0.0, "add_noise: zero signal with finite snr");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix noise(s.data.rows(), s.data.cols());
    for (Eigen::Index i = 0; i < noise.rows(); ++i)
        for (Eigen::Index m = 0; m < noise.cols(); ++m) noise(i, m) = cdouble(gauss(rng), gauss(rng));

    const double scale = signal_norm / (noise.norm() * std::pow(10.0, snr_db / 20.0));
    PhaseHistory out = s;
    out.data += scale * noise;
    return out;
}

namespace {

const char* profile_name(PersistenceProfile p) {
    switch (p) {
        case PersistenceProfile::isotropic: return "isotropic";
        case PersistenceProfile::gaussian: return "gaussian";
        case PersistenceProfile::raised_cosine: return "raised_cosine";
    }
    return "isotropic";
}

PersistenceProfile profile_from_name(const std::string& name) {
    if (name == "isotropic") return PersistenceProfile::isotropic;
    if (name == "gaussian") return PersistenceProfile::gaussian;
    if (name == "raised_cosine") return PersistenceProfile::raised_cosine;
    throw std::invalid_argument("scene: unknown persistence profile '" + name + "'");
}

} // namespace

std::string scene_to_json_text(const SceneDescription& scene) {
    nlohmann::ordered_json doc;
    doc["extent_m"] = scene.extent_m;
    doc["elevation_deg"] = rad2deg(scene.elevation_rad);
    doc["scatterers"] = nlohmann::ordered_json::array();
    for (const Scatterer& sc : scene.scatterers) {
        nlohmann::ordered_json item;
        item["x_m"] = sc.x_m;
        item["y_m"] = sc.y_m;
        item["amp_re"] = sc.amplitude.real();
        item["amp_im"] = sc.amplitude.imag();
        item["profile"] = profile_name(sc.profile);
        item["theta0_deg"] = rad2deg(sc.theta0_rad);
        item["width_deg"] = rad2deg(sc.width_rad);
        doc["scatterers"].push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

SceneDescription scene_from_json_text(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    SceneDescription scene;
    scene.extent_m = doc.at("extent_m").get<double>();
    scene.elevation_rad = deg2rad(doc.value("elevation_deg", 0.0));
    for (const auto& item : doc.at("scatterers")) {
        Scatterer sc;
        sc.x_m = item.at("x_m").get<double>();
        sc.y_m = item.at("y_m").get<double>();
        sc.amplitude = cdouble(item.value("amp_re", 1.0), item.value("amp_im", 0.0));
        sc.profile = profile_from_name(item.value("profile", std::string("isotropic")));
        sc.theta0_rad = deg2rad(item.value("theta0_deg", 0.0));
        sc.width_rad = deg2rad(item.value("width_deg", 0.0));
        scene.scatterers.push_back(sc);
    }
    scene.validate();
    return scene;
}

SceneDescription read_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_scene: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scene_from_json_text(text);
}

void write_scene(const SceneDescription& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_scene: cannot open " + path);
    out << scene_to_json_text(scene);
}

} // namespace sar
