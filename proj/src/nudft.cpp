#include "sar/nudft.hpp"

#include "sar/parallel.hpp"
#include "sar/types.hpp"

#include <cmath>
#include <stdexcept>

namespace sar {

namespace {

bool uniform_freqs(const std::vector<double>& f) {
    if (f.size() < 3) return true;
    const double step = (f.back() - f.front()) / static_cast<double>(f.size() - 1);
    for (std::size_t m = 1; m < f.size(); ++m) {
        if (std::abs(f[m] - f[m - 1] - step) > 1e-9 * std::abs(step) + 1e-30) return false;
    }
    return true;
}

// Phase scale of the measurement kernel: -4 pi cos(elev) / c.
double phase_scale(const PolarGrid& grid) {
    return -4.0 * kPi * std::cos(grid.elevation_rad) / kSpeedOfLight;
}

} // namespace

ScenePoints scene_points(const SpatialGrid& grid) {
    ScenePoints pts;
    const int k_total = grid.num_points();
    pts.x.resize(static_cast<std::size_t>(k_total));
    pts.y.resize(static_cast<std::size_t>(k_total));
    for (int k = 0; k < k_total; ++k) {
        const auto [x, y] = grid.point(k);
        pts.x[static_cast<std::size_t>(k)] = x;
        pts.y[static_cast<std::size_t>(k)] = y;
    }
    return pts;
}

ScenePoints scene_points(const ComplexImage& img) {
    ScenePoints pts;
    pts.x.reserve(static_cast<std::size_t>(img.data.size()));
    pts.y.reserve(static_cast<std::size_t>(img.data.size()));
    for (Eigen::Index r = 0; r < img.rows(); ++r) {
        for (Eigen::Index c = 0; c < img.cols(); ++c) {
            pts.x.push_back(img.coord_x(c));
            pts.y.push_back(img.coord_y(r));
        }
    }
    return pts;
}

CMatrix nudft_forward(const CVector& weights, const ScenePoints& pts, const PolarGrid& grid,
                      int jobs) {
    grid.validate();
    if (static_cast<std::size_t>(weights.size()) != pts.size())
        throw std::invalid_argument("nudft_forward: weights/points size mismatch");

    const auto n_theta = static_cast<Eigen::Index>(grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(grid.num_freqs());
    const std::size_t k_total = pts.size();
    const double beta = phase_scale(grid);
    const bool uniform = uniform_freqs(grid.freqs);
    const double f0 = grid.freqs.front();
    const double df = grid.freq_spacing();

    CMatrix out = CMatrix::Zero(n_theta, n_freq);
    parallel_for(static_cast<std::size_t>(n_theta), [&](std::size_t i) {
        const double theta = grid.thetas[i] - grid.theta_look;
        const double ct = std::cos(theta), st = std::sin(theta);
        cdouble* row = out.row(static_cast<Eigen::Index>(i)).data();
        for (std::size_t k = 0; k < k_total; ++k) {
            const cdouble w = weights(static_cast<Eigen::Index>(k));
            if (w == cdouble(0.0, 0.0)) continue;
            const double range = pts.x[k] * ct + pts.y[k] * st;
            if (uniform) {
                cdouble cur = w * std::polar(1.0, beta * f0 * range);
                const cdouble step = std::polar(1.0, beta * df * range);
                for (Eigen::Index m = 0; m < n_freq; ++m) {
                    row[m] += cur;
                    cur *= step;
                }
            } else {
                for (Eigen::Index m = 0; m < n_freq; ++m)
                    row[m] += w * std::polar(1.0, beta * grid.freqs[static_cast<std::size_t>(m)] * range);
            }
        }
    }, jobs);
    return out;
}

CVector nudft_adjoint(const CMatrix& data, const ScenePoints& pts, const PolarGrid& grid,
                      int jobs) {
    grid.validate();
    const auto n_theta = static_cast<Eigen::Index>(grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(grid.num_freqs());
    if (data.rows() != n_theta || data.cols() != n_freq)
        throw std::invalid_argument("nudft_adjoint: data dimensions do not match grid");

    const std::size_t k_total = pts.size();
    const double beta = phase_scale(grid);
    const bool uniform = uniform_freqs(grid.freqs);
    const double f0 = grid.freqs.front();
    const double df = grid.freq_spacing();

    std::vector<double> ct(grid.num_pulses()), st(grid.num_pulses());
    for (std::size_t i = 0; i < grid.num_pulses(); ++i) {
        ct[i] = std::cos(grid.thetas[i] - grid.theta_look);
        st[i] = std::sin(grid.thetas[i] - grid.theta_look);
    }

    CVector out = CVector::Zero(static_cast<Eigen::Index>(k_total));
    parallel_for(k_total, [&](std::size_t k) {
        cdouble acc(0.0, 0.0);
        for (Eigen::Index i = 0; i < n_theta; ++i) {
            const double range = pts.x[k] * ct[static_cast<std::size_t>(i)] +
                                 pts.y[k] * st[static_cast<std::size_t>(i)];
            const cdouble* row = data.row(i).data();
            if (uniform) {
                // conj of the forward kernel generated by the same recurrence
                cdouble cur = std::conj(std::polar(1.0, beta * f0 * range));
                const cdouble step = std::conj(std::polar(1.0, beta * df * range));
                for (Eigen::Index m = 0; m < n_freq; ++m) {
                    acc += cur * row[m];
                    cur *= step;
                }
            } else {
                for (Eigen::Index m = 0; m < n_freq; ++m)
                    acc += std::conj(std::polar(1.0, beta * grid.freqs[static_cast<std::size_t>(m)] * range)) * row[m];
            }
        }
        out(static_cast<Eigen::Index>(k)) = acc;
    }, jobs);
    return out;
}

CVector nudft_invert(const CMatrix& data, const ScenePoints& pts, const PolarGrid& grid,
                     const CglsOptions& opts, CglsReport* report) {
    const double b_norm = data.norm();
    CVector x = CVector::Zero(static_cast<Eigen::Index>(pts.size()));
    if (b_norm == 0.0) {
        if (report) *report = {0, 0.0};
        return x;
    }

    // CGLS on min ||A x - b||_2.
    CMatrix r = data;
    CVector s = nudft_adjoint(r, pts, grid, opts.jobs);
    CVector p = s;
    double gamma = s.squaredNorm();
    const double s0_norm = std::sqrt(gamma);
    int it = 0;
    double rel = 1.0;
    for (; it < opts.max_iters; ++it) {
        rel = r.norm() / b_norm;
        if (rel <= opts.rel_tol) break;
        if (std::sqrt(gamma) <= 1e-14 * s0_norm) break; // stagnated normal equations
        const CMatrix q = nudft_forward(p, pts, grid, opts.jobs);
        const double q_sq = q.squaredNorm();
        if (q_sq == 0.0) break;
        const double alpha = gamma / q_sq;
        x += alpha * p;
        r -= alpha * q;
        s = nudft_adjoint(r, pts, grid, opts.jobs);
        const double gamma_new = s.squaredNorm();
        p = s + (gamma_new / gamma) * p;
        gamma = gamma_new;
    }
    if (report) *report = {it, rel};
    return x;
}

} // namespace sar
