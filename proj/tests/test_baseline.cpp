#include "sar/baseline.hpp"

#include "oracles.hpp"
#include "sar/transform.hpp"

#include <doctest.h>

using namespace sar;

TEST_CASE("nearest poses by circular distance") {
    SUBCASE("straddling neighbors") {
        const auto [a, b] = nearest_poses({deg2rad(56.0), deg2rad(85.0)}, deg2rad(57.0));
        CHECK(a == doctest::Approx(deg2rad(56.0)));
        CHECK(b == doctest::Approx(deg2rad(85.0)));
    }
    SUBCASE("exact match is the closer pose") {
        const auto [a, b] =
            nearest_poses({deg2rad(10.0), deg2rad(30.0), deg2rad(60.0)}, deg2rad(30.0));
        CHECK(a == doctest::Approx(deg2rad(30.0)));
        CHECK(b == doctest::Approx(deg2rad(10.0))); // 20 deg away beats 30 deg
    }
    SUBCASE("wraparound distances") {
        const auto [a, b] = nearest_poses({deg2rad(359.0), deg2rad(10.0)}, deg2rad(1.0));
        CHECK(a == doctest::Approx(deg2rad(359.0))); // circular distance 2 < 9
        CHECK(b == doctest::Approx(deg2rad(10.0)));
    }
    SUBCASE("fewer than two distinct poses is invalid") {
        CHECK_THROWS_AS(nearest_poses({deg2rad(5.0)}, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(nearest_poses({deg2rad(5.0), deg2rad(5.0)}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("interpolation weights") {
    SUBCASE("published example angles") {
        const auto [wa, wb] = interp_weights(deg2rad(56.0), deg2rad(85.0), deg2rad(57.0));
        CHECK(wa == doctest::Approx(28.0 / 29.0).epsilon(1e-12));
        CHECK(wb == doctest::Approx(1.0 / 29.0).epsilon(1e-12));
        CHECK(wa + wb == 1.0); // exact by construction
        CHECK(wa >= 0.0);
        CHECK(wb >= 0.0);
    }
    SUBCASE("collapse onto a neighbor") {
        const auto [wa, wb] = interp_weights(deg2rad(56.0), deg2rad(85.0), deg2rad(56.0));
        CHECK(wa == doctest::Approx(1.0));
        CHECK(wb == doctest::Approx(0.0));
    }
    SUBCASE("wraparound branch alignment") {
        const auto [wa, wb] = interp_weights(deg2rad(359.0), deg2rad(10.0), deg2rad(1.0));
        // distances: 2 deg from a, 9 deg from b
        CHECK(wa == doctest::Approx(9.0 / 11.0).epsilon(1e-12));
        CHECK(wb == doctest::Approx(2.0 / 11.0).epsilon(1e-12));
    }
}

TEST_CASE("rotate_pose is the identity at the source pose") {
    const ComplexImage img = oracle::smooth_phantom_image(16, 0.3, 30);
    const ComplexImage out = rotate_pose(img, deg2rad(56.0), deg2rad(56.0));
    CHECK(oracle::rel_error(out.data, img.data) <= 1e-12);
}

TEST_CASE("rotate_pose forward then back restores the interior") {
    const ComplexImage img = oracle::smooth_phantom_image(24, 0.3, 31);
    const ComplexImage there = rotate_pose(img, deg2rad(40.0), deg2rad(57.0));
    const ComplexImage back = rotate_pose(there, deg2rad(57.0), deg2rad(40.0));
    const ComplexImage a = crop_center(back, 12, 12);
    const ComplexImage b = crop_center(img, 12, 12);
    CHECK(oracle::rel_error(a.data, b.data) <= 0.05);
}

TEST_CASE("linear interpolation baseline") {
    const ComplexImage ia = oracle::smooth_phantom_image(24, 0.3, 41);
    const ComplexImage ib = oracle::smooth_phantom_image(24, 0.3, 42);

    SUBCASE("collapses to the nearer image at its pose") {
        PoseNeighborhood nbr{deg2rad(56.0), ia, deg2rad(85.0), ib};
        const ComplexImage out = linear_interp_pose(nbr, deg2rad(56.0));
        const ComplexImage inner_out = crop_center(out, 12, 12);
        const ComplexImage inner_a = crop_center(ia, 12, 12);
        CHECK(oracle::rel_error(inner_out.data, inner_a.data) <= 0.05);
    }
    SUBCASE("swapping the neighbor labels changes nothing") {
        PoseNeighborhood fwd{deg2rad(50.0), ia, deg2rad(70.0), ib};
        PoseNeighborhood swp{deg2rad(70.0), ib, deg2rad(50.0), ia};
        const ComplexImage a = linear_interp_pose(fwd, deg2rad(57.0));
        const ComplexImage b = linear_interp_pose(swp, deg2rad(57.0));
        CHECK((a.data - b.data).norm() <= 1e-12 * a.data.norm());
    }
    SUBCASE("matches the published weight composition") {
        PoseNeighborhood nbr{deg2rad(56.0), ia, deg2rad(85.0), ib};
        const ComplexImage got = linear_interp_pose(nbr, deg2rad(57.0));
        // independent composition from the same rotation primitive
        const ComplexImage ra = rotate_image(ia, deg2rad(56.0), RotationDirection::cw);
        const ComplexImage rb = rotate_image(ib, deg2rad(85.0), RotationDirection::cw);
        ComplexImage blend;
        blend.pixel_spacing_m = ia.pixel_spacing_m;
        blend.data = (28.0 / 29.0) * ra.data + (1.0 / 29.0) * rb.data;
        const ComplexImage want = rotate_image(blend, deg2rad(57.0), RotationDirection::ccw);
        CHECK(oracle::rel_error(got.data, want.data) <= 1e-12);
    }
    SUBCASE("identical images at symmetric poses average symmetrically") {
        PoseNeighborhood nbr{deg2rad(-2.0), ia, deg2rad(2.0), ia};
        const ComplexImage out = linear_interp_pose(nbr, 0.0);
        const ComplexImage ra = rotate_image(ia, deg2rad(-2.0), RotationDirection::cw);
        const ComplexImage rb = rotate_image(ia, deg2rad(2.0), RotationDirection::cw);
        ComplexImage want;
        want.pixel_spacing_m = ia.pixel_spacing_m;
        want.data = 0.5 * (ra.data + rb.data);
        CHECK(oracle::rel_error(out.data, want.data) <= 1e-12);
    }
    SUBCASE("dimensions are preserved and equal poses rejected") {
        PoseNeighborhood nbr{deg2rad(50.0), ia, deg2rad(70.0), ib};
        const ComplexImage out = linear_interp_pose(nbr, deg2rad(55.0));
        CHECK(out.rows() == ia.rows());
        CHECK(out.cols() == ia.cols());
        PoseNeighborhood bad{deg2rad(50.0), ia, deg2rad(50.0), ib};
        CHECK_THROWS_AS(linear_interp_pose(bad, deg2rad(55.0)), std::invalid_argument);
    }
}
