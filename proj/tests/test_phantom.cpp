#include "sar/phantom.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace sar;

namespace {

PolarGrid centered_grid(int pulses, int freqs) {
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, pulses);
    return make_polar_grid(params, freqs * 0.3);
}

} // namespace

TEST_CASE("single isotropic scatterer at the origin gives all-ones samples") {
    SceneDescription scene;
    scene.extent_m = 3.0;
    scene.scatterers = {{0.0, 0.0, cdouble(1.0, 0.0), PersistenceProfile::isotropic, 0.0, 0.0}};
    const PhaseHistory s = simulate_measurements(scene, centered_grid(8, 8));
    for (Eigen::Index i = 0; i < s.data.rows(); ++i)
        for (Eigen::Index m = 0; m < s.data.cols(); ++m)
            CHECK(std::abs(s.data(i, m) - cdouble(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("offset scatterer has a linear phase ramp over frequency at boresight") {
    const double x = 1.2;
    SceneDescription scene;
    scene.extent_m = 6.0;
    scene.scatterers = {{x, 0.0, cdouble(1.0, 0.0), PersistenceProfile::isotropic, 0.0, 0.0}};
    PolarGrid grid = centered_grid(9, 8); // odd pulse count -> a pulse exactly at 0
    const PhaseHistory s = simulate_measurements(scene, grid);

    const Eigen::Index i0 = 4;
    REQUIRE(std::abs(grid.thetas[static_cast<std::size_t>(i0)]) <= 1e-15);
    const double slope = -4.0 * kPi * x * std::cos(grid.elevation_rad) / kSpeedOfLight;
    for (Eigen::Index m = 0; m < s.data.cols(); ++m) {
        const double expected = slope * grid.freqs[static_cast<std::size_t>(m)];
        const cdouble predicted = std::polar(1.0, expected);
        CHECK(std::abs(s.data(i0, m) - predicted) <= 1e-9);
    }
}

TEST_CASE("superposition of scatterers") {
    Scatterer a{1.0, -0.5, cdouble(0.7, 0.1), PersistenceProfile::isotropic, 0.0, 0.0};
    Scatterer b{-0.8, 0.9, cdouble(-0.3, 0.6), PersistenceProfile::gaussian, deg2rad(0.2),
                deg2rad(1.0)};
    const PolarGrid grid = centered_grid(8, 8);

    SceneDescription both;
    both.extent_m = 4.0;
    both.scatterers = {a, b};
    SceneDescription only_a = both, only_b = both;
    only_a.scatterers = {a};
    only_b.scatterers = {b};

    const CMatrix sum =
        simulate_measurements(only_a, grid).data + simulate_measurements(only_b, grid).data;
    CHECK((simulate_measurements(both, grid).data - sum).norm() <= 1e-12 * sum.norm());
}

TEST_CASE("anisotropic magnitude envelope matches the persistence profile") {
    const double width = deg2rad(1.0);
    const double theta0 = deg2rad(0.3);
    SceneDescription scene;
    scene.extent_m = 2.0;
    scene.scatterers = {{0.0, 0.0, cdouble(2.0, 1.0), PersistenceProfile::gaussian, theta0, width}};
    const PolarGrid grid = centered_grid(32, 4);
    const PhaseHistory s = simulate_measurements(scene, grid);
    const double amp = std::abs(cdouble(2.0, 1.0));
    for (Eigen::Index i = 0; i < s.data.rows(); ++i) {
        const double t = (grid.thetas[static_cast<std::size_t>(i)] - theta0) / (2.0 * width);
        CHECK(std::abs(std::abs(s.data(i, 0)) - amp * std::exp(-t * t)) <= 1e-12 * amp);
    }
}

TEST_CASE("dense azimuth sweep of an anisotropic scatterer peaks at its center") {
    const double theta0 = deg2rad(0.4);
    SceneDescription scene;
    scene.extent_m = 2.0;
    scene.scatterers = {{0.3, -0.2, cdouble(1.0, 0.0), PersistenceProfile::gaussian, theta0,
                         deg2rad(0.8)}};
    const auto thetas = linspace(-deg2rad(1.5), deg2rad(1.5), 201);
    const PhaseHistory s = ground_truth_at(scene, thetas, {9.3e9}, 0.0);
    Eigen::Index peak = 0;
    for (Eigen::Index i = 1; i < s.data.rows(); ++i)
        if (std::abs(s.data(i, 0)) > std::abs(s.data(peak, 0))) peak = i;
    CHECK(std::abs(thetas[static_cast<std::size_t>(peak)] - theta0) <= deg2rad(0.02));
}

TEST_CASE("raised-cosine profile is compactly supported") {
    Scatterer sc{0.0, 0.0, cdouble(1.0, 0.0), PersistenceProfile::raised_cosine, 0.0, deg2rad(1.0)};
    CHECK(std::abs(sc.reflectivity(0.0) - cdouble(1.0, 0.0)) <= 1e-15);
    CHECK(sc.reflectivity(deg2rad(1.0)) == cdouble(0.0, 0.0));
    CHECK(std::abs(sc.reflectivity(deg2rad(0.5)) - cdouble(0.5, 0.0)) <= 1e-12);
}

TEST_CASE("ground_truth_at matches simulate_measurements on the same grid") {
    SceneDescription scene;
    scene.extent_m = 4.0;
    scene.scatterers = {{0.9, 0.3, cdouble(0.5, -0.5), PersistenceProfile::gaussian, 0.0,
                         deg2rad(1.2)}};
    const PolarGrid grid = centered_grid(8, 8);
    const PhaseHistory a = simulate_measurements(scene, grid);
    const PhaseHistory b = ground_truth_at(scene, grid.thetas, grid.freqs, grid.elevation_rad,
                                           grid.theta_look);
    CHECK((a.data - b.data).norm() == 0.0);

    const PhaseHistory empty = ground_truth_at(scene, {}, {}, 0.0);
    CHECK(empty.data.size() == 0);
}

TEST_CASE("complex scenes are not conjugate-symmetric") {
    SceneDescription scene;
    scene.extent_m = 4.0;
    scene.scatterers = {{0.7, -0.4, cdouble(0.3, 0.9), PersistenceProfile::isotropic, 0.0, 0.0}};
    const PolarGrid grid = centered_grid(9, 9);
    const PhaseHistory s = simulate_measurements(scene, grid);
    // mirror both axes about the center and conjugate; must NOT reproduce s
    const Eigen::Index n = 9;
    double diff = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index m = 0; m < n; ++m)
            diff += std::abs(s.data(i, m) - std::conj(s.data(n - 1 - i, n - 1 - m)));
    CHECK(diff > 1e-3);
}

TEST_CASE("noise injection hits the requested snr") {
    SceneDescription scene;
    scene.extent_m = 4.0;
    scene.scatterers = {{0.5, 0.5, cdouble(1.0, 0.0), PersistenceProfile::isotropic, 0.0, 0.0}};
    const PhaseHistory s = simulate_measurements(scene, centered_grid(16, 16));

    SUBCASE("infinite snr returns the input unchanged") {
        const PhaseHistory out = add_noise(s, std::numeric_limits<double>::infinity(), 1);
        CHECK((out.data - s.data).norm() == 0.0);
    }
    SUBCASE("20 dB within a tenth of a dB") {
        const PhaseHistory noisy = add_noise(s, 20.0, 99);
        const double measured =
            10.0 * std::log10(s.data.squaredNorm() / (noisy.data - s.data).squaredNorm());
        CHECK(measured == doctest::Approx(20.0).epsilon(0.005));
    }
    SUBCASE("same seed reproduces the noise") {
        const PhaseHistory a = add_noise(s, 10.0, 7);
        const PhaseHistory b = add_noise(s, 10.0, 7);
        CHECK((a.data - b.data).norm() == 0.0);
    }
    SUBCASE("zero signal with finite snr is invalid") {
        PhaseHistory zero = s;
        zero.data.setZero();
        CHECK_THROWS_AS(add_noise(zero, 10.0, 1), std::invalid_argument);
    }
}

TEST_CASE("scene files round-trip") {
    SceneDescription scene;
    scene.extent_m = 9.6;
    scene.elevation_rad = deg2rad(17.0);
    scene.scatterers = {
        {1.0, -2.0, cdouble(0.5, 1.5), PersistenceProfile::gaussian, deg2rad(56.0), deg2rad(1.3)},
        {-0.7, 0.2, cdouble(1.0, 0.0), PersistenceProfile::isotropic, 0.0, 0.0},
    };
    const std::string text = scene_to_json_text(scene);
    const SceneDescription back = scene_from_json_text(text);
    REQUIRE(back.scatterers.size() == 2);
    CHECK(back.extent_m == doctest::Approx(scene.extent_m));
    CHECK(back.elevation_rad == doctest::Approx(scene.elevation_rad));
    CHECK(back.scatterers[0].x_m == doctest::Approx(1.0));
    CHECK(back.scatterers[0].width_rad == doctest::Approx(deg2rad(1.3)));
    CHECK(back.scatterers[1].profile == PersistenceProfile::isotropic);

    CHECK_THROWS(scene_from_json_text("{\"extent_m\": -1, \"scatterers\": []}"));
}
