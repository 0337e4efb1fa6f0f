#include "sar/transform.hpp"

#include "oracles.hpp"
#include "sar/phantom.hpp"

#include <doctest.h>

#include <random>

using namespace sar;

namespace {

WindowSpec rect_window() {
    WindowSpec w;
    w.family = WindowFamily::rect;
    return w;
}

TransformOptions exact_opts(int max_iters = 3000) {
    TransformOptions o;
    o.mode = TransformMode::exact;
    o.cgls.rel_tol = 1e-13;
    o.cgls.max_iters = max_iters;
    return o;
}

} // namespace

TEST_CASE("taylor window basics") {
    CHECK(taylor_window(1, 4, -35.0) == std::vector<double>{1.0});

    const auto w = taylor_window(64, 4, -35.0);
    for (int i = 0; i < 64; ++i) CHECK(w[static_cast<std::size_t>(i)] ==
                                       w[static_cast<std::size_t>(63 - i)]);
    CHECK(*std::max_element(w.begin(), w.end()) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(taylor_window(64, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(taylor_window(64, 4, 35.0), std::invalid_argument);
}

TEST_CASE("taylor window matches the reference series to 1e-10") {
    for (const auto& [n, nbar, sll] : std::vector<std::tuple<int, int, double>>{
             {64, 4, -35.0}, {33, 5, -40.0}, {100, 4, -30.0}, {7, 2, -25.0}}) {
        const auto got = taylor_window(n, nbar, sll);
        const auto want = oracle::taylor_reference(n, nbar, sll);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(got[static_cast<std::size_t>(i)] - want[static_cast<std::size_t>(i)]) <=
                  1e-10);
    }
}

TEST_CASE("taylor window cross-checked against frozen external values") {
    // scipy.signal.windows.taylor(64, nbar=4, sll=35, norm=False) / max
    const auto w = taylor_window(64, 4, -35.0);
    CHECK(w[0] == doctest::Approx(0.16850542943113017).epsilon(1e-12));
    CHECK(w[7] == doctest::Approx(0.29800948077221018).epsilon(1e-12));
    CHECK(w[15] == doctest::Approx(0.60065692654428049).epsilon(1e-12));
    CHECK(w[31] == doctest::Approx(1.0).epsilon(1e-12));
    // taylor(33, nbar=5, sll=40, norm=False) / max
    const auto w2 = taylor_window(33, 5, -40.0);
    CHECK(w2[0] == doctest::Approx(0.11249122252939696).epsilon(1e-12));
    CHECK(w2[5] == doctest::Approx(0.35902798306408812).epsilon(1e-12));
    CHECK(w2[16] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("de-windowing clamps tiny weights and reports them") {
    std::vector<double> inverse;
    const std::vector<double> w{1.0, 0.5, 1e-9, 0.0};
    const int clamped = dewindow_weights(inverse, w, 1e-6);
    CHECK(clamped == 2);
    CHECK(inverse[0] == doctest::Approx(1.0));
    CHECK(inverse[1] == doctest::Approx(2.0));
    CHECK(inverse[2] == doctest::Approx(1e6)); // clamped at eps * max
    CHECK(inverse[3] == doctest::Approx(1e6));
}

TEST_CASE("exact transforms round-trip image -> samples -> image") {
    const int n = 16;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    const ComplexImage img = oracle::smooth_phantom_image(n, 0.3, 7);

    const PhaseHistory ph = image_to_phase_history(img, grid, rect_window(), exact_opts());
    const ComplexImage back = phase_history_to_image(ph, n, rect_window(), exact_opts());
    CHECK(oracle::rel_error(back.data, img.data) <= 1e-6);
    CHECK(back.pixel_spacing_m == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("exact transforms round-trip samples -> image -> samples") {
    // measurements consistent with the pixel lattice by construction
    const int n = 16;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    const ComplexImage img = oracle::smooth_phantom_image(n, 0.3, 21);
    const PhaseHistory ph = image_to_phase_history(img, grid, rect_window(), exact_opts());

    const ComplexImage formed = phase_history_to_image(ph, n, rect_window(), exact_opts());
    const PhaseHistory again = image_to_phase_history(formed, grid, rect_window(), exact_opts());
    CHECK(oracle::rel_error(again.data, ph.data) <= 1e-6);
}

TEST_CASE("round trip holds with a taylor window applied") {
    const int n = 12;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    const ComplexImage img = oracle::smooth_phantom_image(n, 0.3, 3);

    WindowSpec window;
    window.family = WindowFamily::taylor;
    const PhaseHistory ph = image_to_phase_history(img, grid, window, exact_opts());
    const ComplexImage back = phase_history_to_image(ph, n, window, exact_opts());
    CHECK(oracle::rel_error(back.data, img.data) <= 1e-6);
}

TEST_CASE("zero image maps to zero samples and back") {
    const int n = 8;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    ComplexImage img;
    img.pixel_spacing_m = 0.3;
    img.data = CMatrix::Zero(n, n);

    for (TransformMode mode : {TransformMode::exact, TransformMode::fast}) {
        TransformOptions opts;
        opts.mode = mode;
        const PhaseHistory ph = image_to_phase_history(img, grid, rect_window(), opts);
        CHECK(ph.data.norm() == 0.0);
        const ComplexImage back = phase_history_to_image(ph, n, rect_window(), opts);
        CHECK(back.data.norm() == 0.0);
    }
}

TEST_CASE("unit pixel at the scene center gives unit-modulus samples") {
    const int n = 9; // odd so a pixel sits exactly at (0, 0)
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    ComplexImage img;
    img.pixel_spacing_m = 0.3;
    img.data = CMatrix::Zero(n, n);
    img.data(4, 4) = cdouble(1.0, 0.0);

    const PhaseHistory ph = image_to_phase_history(img, grid, rect_window(), exact_opts());
    for (Eigen::Index i = 0; i < ph.data.rows(); ++i)
        for (Eigen::Index m = 0; m < ph.data.cols(); ++m)
            CHECK(std::abs(ph.data(i, m)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transforms are linear") {
    const int n = 8;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    ComplexImage x = oracle::smooth_phantom_image(n, 0.3, 5);
    ComplexImage y = oracle::smooth_phantom_image(n, 0.3, 6);
    const cdouble a(0.7, -1.3), b(-0.2, 0.4);

    for (TransformMode mode : {TransformMode::exact, TransformMode::fast}) {
        TransformOptions opts;
        opts.mode = mode;
        const CMatrix tx = image_to_phase_history(x, grid, rect_window(), opts).data;
        const CMatrix ty = image_to_phase_history(y, grid, rect_window(), opts).data;
        ComplexImage combo;
        combo.pixel_spacing_m = 0.3;
        combo.data = a * x.data + b * y.data;
        const CMatrix tc = image_to_phase_history(combo, grid, rect_window(), opts).data;
        CHECK((tc - (a * tx + b * ty)).norm() <= 1e-10 * tc.norm());
    }
}

TEST_CASE("exact forward and adjoint pass the dot test") {
    std::mt19937_64 rng(11);
    for (int n : {4, 8}) {
        RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n + 2);
        const PolarGrid grid = make_polar_grid(params, n * 0.3);
        ComplexImage img;
        img.pixel_spacing_m = 0.3;
        img.data = oracle::random_complex_matrix(n, n, rng());
        const CMatrix r = oracle::random_complex_matrix(static_cast<Eigen::Index>(grid.num_pulses()),
                                                        static_cast<Eigen::Index>(grid.num_freqs()),
                                                        rng());

        const CVector weights = [&] {
            CVector v(n * n);
            Eigen::Index idx = 0;
            for (Eigen::Index rr = 0; rr < n; ++rr)
                for (Eigen::Index cc = 0; cc < n; ++cc) v(idx++) = img.data(rr, cc);
            return v;
        }();
        const ScenePoints pts = scene_points(img);
        const CMatrix forward = nudft_forward(weights, pts, grid);
        const CVector back = nudft_adjoint(r, pts, grid);

        const cdouble lhs = (forward.conjugate().cwiseProduct(r)).sum();
        cdouble rhs(0.0, 0.0);
        for (Eigen::Index k = 0; k < weights.size(); ++k)
            rhs += std::conj(weights(k)) * back(k);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * forward.norm() * r.norm());
    }
}

TEST_CASE("fast mode approximates exact mode on matched grids") {
    const int n = 32;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);

    SceneDescription scene;
    scene.extent_m = n * 0.3;
    scene.scatterers = {
        {1.2, -0.9, cdouble(1.0, 0.4), PersistenceProfile::isotropic, 0.0, 0.0},
        {-2.1, 1.5, cdouble(0.4, -0.8), PersistenceProfile::isotropic, 0.0, 0.0},
    };
    const PhaseHistory ph = simulate_measurements(scene, grid);

    TransformOptions fast;
    fast.mode = TransformMode::fast;
    const ComplexImage img_fast = phase_history_to_image(ph, n, rect_window(), fast);
    const ComplexImage img_exact = phase_history_to_image(ph, n, rect_window(), exact_opts(6000));
    CHECK(oracle::rel_error(img_fast.data, img_exact.data) <= 1e-2);
}

TEST_CASE("parseval relation holds within the densified operator bound") {
    const int n = 8;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    const ComplexImage img = oracle::smooth_phantom_image(n, 0.3, 17);

    // densify the exact operator and bound its singular value spread
    GaussianBasisSet trivial{{0.0}, 1e308};
    const SpatialGrid spatial{n * 0.3, n, 0.3};
    const Eigen::MatrixXcd a = oracle::dense_scattering_matrix(spatial, trivial, grid);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const double unitary_scale =
        std::sqrt(static_cast<double>(grid.num_pulses() * grid.num_freqs()));
    const double spread = std::max(svd.singularValues()(0) - unitary_scale,
                                   unitary_scale - svd.singularValues().tail(1)(0));

    const PhaseHistory ph = image_to_phase_history(img, grid, rect_window(), exact_opts());
    const double ratio = ph.data.norm() / img.data.norm();
    CHECK(std::abs(ratio - unitary_scale) <= spread * (1.0 + 1e-9));
}

TEST_CASE("subpixel shift basics") {
    const ComplexImage img = oracle::smooth_phantom_image(16, 0.3, 9);

    SUBCASE("zero shift is the identity") {
        const ComplexImage out = subpixel_shift(img, 0.0, 0.0);
        CHECK(oracle::rel_error(out.data, img.data) <= 1e-12);
    }
    SUBCASE("one-pixel shift equals a circular roll") {
        const ComplexImage out = subpixel_shift(img, 0.3, 0.0);
        CMatrix rolled(16, 16);
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 16; ++c) rolled(r, c) = img.data(r, (c + 15) % 16);
        CHECK(oracle::rel_error(out.data, rolled) <= 1e-9);
    }
    SUBCASE("two half-pixel shifts equal one full shift") {
        const ComplexImage twice = subpixel_shift(subpixel_shift(img, 0.15, 0.0), 0.15, 0.0);
        const ComplexImage once = subpixel_shift(img, 0.3, 0.0);
        CHECK(oracle::rel_error(twice.data, once.data) <= 1e-9);
    }
    SUBCASE("energy is preserved") {
        const ComplexImage out = subpixel_shift(img, 0.08, -0.21);
        CHECK(std::abs(out.norm() - img.norm()) <= 1e-9 * img.norm());
    }
    SUBCASE("vertical shift rolls rows") {
        const ComplexImage out = subpixel_shift(img, 0.0, 0.3);
        CMatrix rolled(16, 16);
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 16; ++c) rolled(r, c) = img.data((r + 15) % 16, c);
        CHECK(oracle::rel_error(out.data, rolled) <= 1e-9);
    }
}

TEST_CASE("rotation basics") {
    const ComplexImage img = oracle::smooth_phantom_image(24, 0.3, 13);

    SUBCASE("zero angle is the identity") {
        const ComplexImage out = rotate_image(img, 0.0);
        CHECK(oracle::rel_error(out.data, img.data) <= 1e-12);
    }
    SUBCASE("cw then ccw approximately restores the interior") {
        const double angle = deg2rad(17.0);
        const ComplexImage back =
            rotate_image(rotate_image(img, angle, RotationDirection::cw), angle,
                         RotationDirection::ccw);
        // compare on the central region only; corners fall out of support
        const ComplexImage a = crop_center(back, 12, 12);
        const ComplexImage b = crop_center(img, 12, 12);
        CHECK(oracle::rel_error(a.data, b.data) <= 0.05);
    }
    SUBCASE("90 degrees moves an impulse exactly") {
        ComplexImage impulse;
        impulse.pixel_spacing_m = 1.0;
        impulse.data = CMatrix::Zero(9, 9);
        impulse.data(2, 6) = cdouble(1.0, 0.0); // x=+2, y=-2 about center (4,4)
        const ComplexImage out = rotate_image(impulse, kPi / 2.0, RotationDirection::ccw);
        // ccw in (x,y): (x,y) -> (-y,x): (2,-2) -> (2,2) -> pixel (6,6)
        CHECK(std::abs(out.data(6, 6) - cdouble(1.0, 0.0)) <= 1e-12);
        CHECK(out.data.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("center crop follows the floor rule") {
    ComplexImage img = oracle::smooth_phantom_image(11, 0.3, 4);

    const ComplexImage same = crop_center(img, 11, 11);
    CHECK(oracle::rel_error(same.data, img.data) == 0.0);

    const ComplexImage small = crop_center(img, 4, 4);
    // offset floor((11-4)/2) = 3
    CHECK(small.data(0, 0) == img.data(3, 3));

    ComplexImage odd;
    odd.pixel_spacing_m = 1.0;
    odd.data = oracle::random_complex_matrix(65, 65, 2);
    const ComplexImage cropped = crop_center(odd, 64, 64);
    CHECK(cropped.data(0, 0) == odd.data(0, 0)); // offset 0 for the odd remainder

    CHECK_THROWS_AS(crop_center(img, 12, 4), std::invalid_argument);
}

TEST_CASE("128 to 64 crop keeps the center") {
    ComplexImage img;
    img.pixel_spacing_m = 0.3;
    img.data = oracle::random_complex_matrix(128, 128, 77);
    const ComplexImage out = crop_center(img, 64, 64);
    CHECK(out.rows() == 64);
    CHECK(out.data(0, 0) == img.data(32, 32));
    CHECK(out.data(63, 63) == img.data(95, 95));
}

TEST_CASE("formation rejects undersized outputs") {
    const int n = 8;
    RadarParams params = oracle::test_params(0.3, 9.3e9, 3.0, n);
    const PolarGrid grid = make_polar_grid(params, n * 0.3);
    PhaseHistory ph;
    ph.grid = grid;
    ph.data = CMatrix::Zero(n, n);
    CHECK_THROWS_AS(phase_history_to_image(ph, n - 1, rect_window()), std::invalid_argument);
}
