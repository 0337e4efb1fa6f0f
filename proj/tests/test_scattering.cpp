#include "sar/scattering.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace sar;

namespace {

struct SmallProblem {
    SpatialGrid spatial;
    GaussianBasisSet basis;
    PolarGrid grid;
};

SmallProblem small_problem(int n_range, int d, int pulses, double spacing = 0.3) {
    SmallProblem p;
    RadarParams params = oracle::test_params(spacing, 9.3e9, 3.0, pulses);
    p.spatial = make_spatial_grid(params, n_range * spacing);
    p.grid = make_polar_grid(params, n_range * spacing);
    p.basis.centers_rad = make_basis_centers(0.0, deg2rad(1.5), d);
    p.basis.sigma_rad = deg2rad(1.0);
    return p;
}

} // namespace

TEST_CASE("basis centers are interval midpoints") {
    const auto c12 = make_basis_centers(0.0, deg2rad(1.5), 12);
    CHECK(c12.size() == 12);
    for (std::size_t v = 1; v < c12.size(); ++v)
        CHECK(c12[v] - c12[v - 1] == doctest::Approx(deg2rad(0.25)).epsilon(1e-12));
    CHECK(c12.front() == doctest::Approx(-deg2rad(1.5) + deg2rad(0.125)).epsilon(1e-12));

    const auto c1 = make_basis_centers(0.7, 0.2, 1);
    CHECK(c1.size() == 1);
    CHECK(c1[0] == doctest::Approx(0.7).epsilon(1e-15));

    const auto c2 = make_basis_centers(0.0, 1.0, 2);
    CHECK(c2[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(c2[1] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(make_basis_centers(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("gaussian kernel values") {
    GaussianBasisSet basis{{0.1}, 0.02};
    CHECK(gaussian_basis(0.1, basis)(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gaussian_basis(0.1 + 2.0 * 0.02, basis)(0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (double delta : {0.005, 0.02, 0.31}) {
        CHECK(gaussian_basis(0.1 + delta, basis)(0) ==
              doctest::Approx(gaussian_basis(0.1 - delta, basis)(0)).epsilon(1e-15));
    }
}

TEST_CASE("forward operator basics") {
    const auto p = small_problem(4, 3, 8);
    const auto d = static_cast<Eigen::Index>(p.basis.size());

    SUBCASE("zero coefficients give zero samples") {
        const PhaseHistory out =
            scattering_forward(CMatrix::Zero(d, p.spatial.num_points()), p.spatial, p.basis, p.grid);
        CHECK(out.data.norm() == 0.0);
    }

    SUBCASE("single group at the scene center is constant over frequency") {
        // center of a 4x4 grid is off-cell; use a 5x5 grid so (0,0) is a point
        const auto q = small_problem(5, 3, 8);
        const int k0 = q.spatial.index_of(0.0, 0.0);
        CMatrix coeffs = CMatrix::Zero(3, q.spatial.num_points());
        coeffs(0, k0) = cdouble(0.7, -0.2);
        coeffs(2, k0) = cdouble(-0.1, 0.4);
        const PhaseHistory out = scattering_forward(coeffs, q.spatial, q.basis, q.grid);
        for (Eigen::Index i = 0; i < out.data.rows(); ++i) {
            const RVector psi = gaussian_basis(q.grid.thetas[static_cast<std::size_t>(i)], q.basis);
            const cdouble expected = coeffs(0, k0) * psi(0) + coeffs(2, k0) * psi(2);
            for (Eigen::Index m = 0; m < out.data.cols(); ++m)
                CHECK(std::abs(out.data(i, m) - expected) <= 1e-12 * std::abs(expected));
        }
    }

    SUBCASE("matches the dense triple-loop evaluation to 1e-10") {
        const CMatrix coeffs = oracle::random_complex_matrix(d, p.spatial.num_points(), 42);
        const PhaseHistory fast = scattering_forward(coeffs, p.spatial, p.basis, p.grid);
        const Eigen::MatrixXcd a = oracle::dense_scattering_matrix(p.spatial, p.basis, p.grid);
        const Eigen::VectorXcd flat = a * oracle::flatten_coeffs(coeffs);
        Eigen::Index idx = 0;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < fast.data.rows(); ++i)
            for (Eigen::Index m = 0; m < fast.data.cols(); ++m)
                worst = std::max(worst, std::abs(fast.data(i, m) - flat(idx++)));
        CHECK(worst <= 1e-10 * fast.data.norm());
    }

    SUBCASE("dimension mismatches are rejected") {
        CHECK_THROWS_AS(
            scattering_forward(CMatrix::Zero(d + 1, p.spatial.num_points()), p.spatial, p.basis, p.grid),
            std::invalid_argument);
        CHECK_THROWS_AS(scattering_forward(CMatrix::Zero(d, 3), p.spatial, p.basis, p.grid),
                        std::invalid_argument);
    }
}

TEST_CASE("forward is linear and exactly homogeneous under binary scaling") {
    const auto p = small_problem(4, 2, 6);
    const CMatrix c1 = oracle::random_complex_matrix(2, p.spatial.num_points(), 1);
    const CMatrix c2 = oracle::random_complex_matrix(2, p.spatial.num_points(), 2);

    const CMatrix f1 = scattering_forward(c1, p.spatial, p.basis, p.grid).data;
    const CMatrix f2 = scattering_forward(c2, p.spatial, p.basis, p.grid).data;
    const CMatrix fsum = scattering_forward(c1 + c2, p.spatial, p.basis, p.grid).data;
    CHECK((fsum - (f1 + f2)).norm() <= 1e-10 * fsum.norm());

    // powers of two commute with rounding, so this holds bit for bit
    const CMatrix doubled = scattering_forward(2.0 * c1, p.spatial, p.basis, p.grid).data;
    CHECK((doubled - 2.0 * f1).norm() == 0.0);

    const cdouble alpha(0.37, -1.9);
    const CMatrix scaled = scattering_forward(alpha * c1, p.spatial, p.basis, p.grid).data;
    CHECK((scaled - alpha * f1).norm() <= 1e-12 * scaled.norm());
}

TEST_CASE("adjoint passes the dot test across grid sizes") {
    std::mt19937_64 rng(99);
    for (int n_range : {4, 8, 16}) {
        for (int d : {1, 3}) {
            const auto p = small_problem(n_range, d, 8);
            for (int draw = 0; draw < 5; ++draw) {
                const CMatrix coeffs =
                    oracle::random_complex_matrix(d, p.spatial.num_points(), rng());
                PhaseHistory r;
                r.grid = p.grid;
                r.data = oracle::random_complex_matrix(static_cast<Eigen::Index>(p.grid.num_pulses()),
                                                       static_cast<Eigen::Index>(p.grid.num_freqs()),
                                                       rng());
                const PhaseHistory fwd = scattering_forward(coeffs, p.spatial, p.basis, p.grid);
                const CMatrix back = scattering_adjoint(r, p.spatial, p.basis);

                const cdouble lhs = (fwd.data.conjugate().cwiseProduct(r.data)).sum();
                const cdouble rhs = (coeffs.conjugate().cwiseProduct(back)).sum();
                CHECK(std::abs(lhs - rhs) <= 1e-10 * fwd.data.norm() * r.data.norm());
            }
        }
    }
}

TEST_CASE("adjoint of zero is zero") {
    const auto p = small_problem(4, 2, 6);
    PhaseHistory zero;
    zero.grid = p.grid;
    zero.data = CMatrix::Zero(static_cast<Eigen::Index>(p.grid.num_pulses()),
                              static_cast<Eigen::Index>(p.grid.num_freqs()));
    CHECK(scattering_adjoint(zero, p.spatial, p.basis).norm() == 0.0);
}

TEST_CASE("adjoint of a unit response peaks at the emitting entry") {
    const auto p = small_problem(8, 3, 16);
    const int k0 = 2 * p.spatial.n_range + 5;
    const int v0 = 1;
    CMatrix coeffs = CMatrix::Zero(3, p.spatial.num_points());
    coeffs(v0, k0) = cdouble(1.0, 0.0);
    const PhaseHistory response = scattering_forward(coeffs, p.spatial, p.basis, p.grid);
    const CMatrix back = scattering_adjoint(response, p.spatial, p.basis);

    Eigen::Index best_v = 0, best_k = 0;
    double best = 0.0;
    for (Eigen::Index v = 0; v < back.rows(); ++v)
        for (Eigen::Index k = 0; k < back.cols(); ++k)
            if (std::abs(back(v, k)) > best) {
                best = std::abs(back(v, k));
                best_v = v;
                best_k = k;
            }
    CHECK(best_k == k0);
    CHECK(best_v == v0);
}

TEST_CASE("evaluate_model reproduces the training grid bit for bit") {
    const auto p = small_problem(5, 4, 10);
    ScatteringModel model;
    model.spatial = p.spatial;
    model.basis = p.basis;
    model.coeffs = oracle::random_complex_matrix(4, p.spatial.num_points(), 8);
    model.elevation_rad = p.grid.elevation_rad;
    model.theta_center = p.grid.theta_center();
    model.half_span = deg2rad(1.5);
    model.max_extrapolation = deg2rad(3.0);
    model.theta_look = p.grid.theta_look;
    model.freq_start_hz = p.grid.freqs.front();
    model.freq_step_hz = p.grid.freq_spacing();
    model.freq_count = static_cast<int>(p.grid.num_freqs());
    model.pulses = static_cast<int>(p.grid.num_pulses());

    const PhaseHistory direct = scattering_forward(model.coeffs, p.spatial, p.basis, p.grid);
    const PhaseHistory via_model = evaluate_model(model, p.grid.thetas, p.grid.freqs);
    CHECK((direct.data - via_model.data).norm() == 0.0);

    SUBCASE("empty query gives an empty matrix") {
        const PhaseHistory empty = evaluate_model(model, {}, p.grid.freqs);
        CHECK(empty.data.size() == 0);
    }
    SUBCASE("queries far outside the span are rejected") {
        CHECK_THROWS_AS(evaluate_model(model, {model.theta_center + deg2rad(5.0)}, p.grid.freqs),
                        OutOfSpanError);
    }
    SUBCASE("continuity in azimuth against the analytic derivative") {
        const double eps = 1e-6;
        const double theta0 = model.theta_center + deg2rad(0.4);
        const PhaseHistory s0 = evaluate_model(model, {theta0}, p.grid.freqs);
        const PhaseHistory s1 = evaluate_model(model, {theta0 + eps}, p.grid.freqs);

        // analytic d/dtheta of the model response at theta0
        const double beta = -4.0 * kPi * std::cos(model.elevation_rad) / kSpeedOfLight;
        const double theta_rel = theta0 - model.theta_look;
        const RVector psi = gaussian_basis(theta0, model.basis);
        const RVector dpsi = gaussian_basis_derivative(theta0, model.basis);
        double deriv_norm_sq = 0.0;
        for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(p.grid.num_freqs()); ++m) {
            cdouble d_total(0.0, 0.0);
            const double f = p.grid.freqs[static_cast<std::size_t>(m)];
            for (int k = 0; k < p.spatial.num_points(); ++k) {
                const auto [x, y] = p.spatial.point(k);
                const double range = x * std::cos(theta_rel) + y * std::sin(theta_rel);
                const double drange = -x * std::sin(theta_rel) + y * std::cos(theta_rel);
                const cdouble e = std::polar(1.0, beta * f * range);
                cdouble g(0.0, 0.0), dg(0.0, 0.0);
                for (Eigen::Index v = 0; v < model.coeffs.rows(); ++v) {
                    g += model.coeffs(v, k) * psi(v);
                    dg += model.coeffs(v, k) * dpsi(v);
                }
                d_total += (dg + g * cdouble(0.0, beta * f * drange)) * e;
            }
            deriv_norm_sq += std::norm(d_total);
        }
        const double fd = (s1.data - s0.data).norm();
        CHECK(fd <= std::sqrt(deriv_norm_sq) * eps * 1.001 + 1e-12);
    }
}
