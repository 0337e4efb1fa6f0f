#include "sar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sar {

namespace {

double group_penalty(const CMatrix& coeffs, double lambda) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < coeffs.cols(); ++k) sum += coeffs.col(k).norm();
    return lambda * sum;
}

CMatrix prox_groups(const CMatrix& coeffs, double tau) {
    CMatrix out = coeffs;
    for (Eigen::Index k = 0; k < out.cols(); ++k) {
        const double norm = out.col(k).norm();
        if (norm <= tau) {
            out.col(k).setZero();
        } else {
            out.col(k) *= (1.0 - tau / norm);
        }
    }
    return out;
}

} // namespace

void SolverOptions::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("SolverOptions: lambda must be finite and >= 0");
    if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("SolverOptions: rel_tol must be > 0");
}

CVector block_soft_threshold(const CVector& group, double tau) {
    if (tau < 0.0) throw std::invalid_argument("block_soft_threshold: tau must be >= 0");
    const double norm = group.norm();
    if (norm <= tau) return CVector::Zero(group.size());
    return (1.0 - tau / norm) * group;
}

double lipschitz_estimate(const SpatialGrid& spatial, const GaussianBasisSet& basis,
                          const PolarGrid& grid, int jobs) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index k_total = spatial.num_points();

    std::mt19937_64 rng(0x5a17d0c5u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix v(d, k_total);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < k_total; ++c) v(r, c) = cdouble(gauss(rng), gauss(rng));
    const double v0 = v.norm();
    if (v0 == 0.0) return 0.0;
    v /= v0;

    double estimate = 0.0;
    for (int it = 0; it < 200; ++it) {
        const PhaseHistory av = scattering_forward(v, spatial, basis, grid, jobs);
        const CMatrix w = scattering_adjoint(av, spatial, basis, jobs);
        const double rayleigh = std::real((v.conjugate().cwiseProduct(w)).sum());
        const double w_norm = w.norm();
        if (w_norm == 0.0) return 0.0;
        const bool done = it > 0 && std::abs(rayleigh - estimate) <= 1e-4 * std::abs(rayleigh);
        estimate = rayleigh;
        if (done) break;
        v = w / w_norm;
    }
    return estimate;
}

double lambda_max(const PhaseHistory& s, const SpatialGrid& spatial,
                  const GaussianBasisSet& basis, int jobs) {
    const CMatrix back = scattering_adjoint(s, spatial, basis, jobs);
    double best = 0.0;
    for (Eigen::Index k = 0; k < back.cols(); ++k) best = std::max(best, back.col(k).norm());
    return best;
}

FitResult fit_coefficients(const PhaseHistory& s, const SpatialGrid& spatial,
                           const GaussianBasisSet& basis, const SolverOptions& opts) {
    opts.validate();
    s.validate();
    basis.validate();

    const auto d = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index k_total = spatial.num_points();

    double lipschitz = opts.lipschitz_override > 0.0
                           ? opts.lipschitz_override
                           : lipschitz_estimate(spatial, basis, s.grid, opts.jobs);
    if (lipschitz <= 0.0) lipschitz = 1.0; // zero operator: any step works, C stays 0
    // Power iteration approaches ||A||^2 from below; the cushion keeps the
    // step strictly inside 1/L.
    double step_l = (opts.step_rule == StepRule::power_iteration) ? 1.05 * lipschitz : lipschitz;

    auto smooth = [&](const CMatrix& c, PhaseHistory* resid_out = nullptr) {
        PhaseHistory model = scattering_forward(c, spatial, basis, s.grid, opts.jobs);
        model.data = s.data - model.data;
        const double value = 0.5 * model.data.squaredNorm();
        if (resid_out) *resid_out = std::move(model);
        return value;
    };

    FitResult result;
    result.lambda = opts.lambda;
    result.sigma_g = basis.sigma_rad;

    CMatrix coeffs = CMatrix::Zero(d, k_total);
    CMatrix y = coeffs;
    CMatrix prev = coeffs;
    double t = 1.0;
    double objective = 0.5 * s.data.squaredNorm();
    const double initial_objective = objective;
    result.objective_trace.push_back(objective);

    auto prox_step = [&](const CMatrix& base, double l_value, CMatrix* grad_out = nullptr) {
        PhaseHistory resid;
        smooth(base, &resid);
        resid.data = -resid.data; // grad = A*(A base - S)
        const CMatrix grad = scattering_adjoint(resid, spatial, basis, opts.jobs);
        if (grad_out) *grad_out = grad;
        return prox_groups(base - grad / l_value, opts.lambda / l_value);
    };

    int it = 0;
    for (; it < opts.max_iters; ++it) {
        CMatrix candidate;
        if (opts.step_rule == StepRule::backtracking) {
            // grow the local curvature estimate until the quadratic majorizes
            PhaseHistory resid;
            const double fy = smooth(y, &resid);
            resid.data = -resid.data;
            const CMatrix grad = scattering_adjoint(resid, spatial, basis, opts.jobs);
            for (int bt = 0; bt < 60; ++bt) {
                candidate = prox_groups(y - grad / step_l, opts.lambda / step_l);
                const CMatrix diff = candidate - y;
                const double quad = fy + std::real((grad.conjugate().cwiseProduct(diff)).sum()) +
                                    0.5 * step_l * diff.squaredNorm();
                if (smooth(candidate) <= quad + 1e-12 * std::abs(quad)) break;
                step_l *= 2.0;
            }
        } else {
            candidate = prox_step(y, step_l);
        }

        double objective_new = smooth(candidate) + group_penalty(candidate, opts.lambda);
        if (opts.restart && objective_new > objective) {
            // momentum overshoot: restart from the last iterate with a plain
            // step, growing the curvature estimate until it descends
            t = 1.0;
            for (int guard = 0; guard < 60; ++guard) {
                candidate = prox_step(coeffs, step_l);
                objective_new = smooth(candidate) + group_penalty(candidate, opts.lambda);
                if (objective_new <= objective) break;
                step_l *= 2.0;
            }
        }

        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        prev = coeffs;
        coeffs = candidate;
        y = coeffs + ((t - 1.0) / t_new) * (coeffs - prev);
        t = t_new;

        result.objective_trace.push_back(objective_new);
        if (objective_new > 10.0 * initial_objective + 1e-12)
            throw SolverFailure("fit_coefficients: objective diverged");

        const double change = std::abs(objective - objective_new);
        objective = objective_new;
        if (change <= opts.rel_tol * std::max(objective, 1e-300)) {
            result.converged = true;
            ++it;
            break;
        }
    }

    PhaseHistory resid;
    smooth(coeffs, &resid);
    result.coeffs = std::move(coeffs);
    result.residual_fro = resid.data.norm();
    result.lipschitz = step_l;
    result.iterations = it;
    return result;
}

SigmaSelection select_sigma(const PhaseHistory& s, const SpatialGrid& spatial,
                            const std::vector<double>& centers_rad,
                            const std::vector<double>& sigma_candidates,
                            const SolverOptions& opts) {
    if (sigma_candidates.empty())
        throw std::invalid_argument("select_sigma: no candidates");
    std::vector<double> candidates = sigma_candidates;
    std::sort(candidates.begin(), candidates.end());

    SigmaSelection best;
    bool have_best = false;
    double best_objective = 0.0;
    for (double sigma : candidates) {
        if (!(sigma > 0.0))
            throw std::invalid_argument("select_sigma: candidates must be > 0");
        GaussianBasisSet basis{centers_rad, sigma};
        try {
            FitResult fit = fit_coefficients(s, spatial, basis, opts);
            const double objective = fit.objective_trace.back();
            if (!have_best || objective < best_objective) {
                best = SigmaSelection{sigma, std::move(fit), std::move(basis)};
                best_objective = objective;
                have_best = true;
            }
        } catch (const SolverFailure&) {
            continue; // candidate skipped
        }
    }
    if (!have_best) throw SolverFailure("select_sigma: every candidate fit failed");
    return best;
}

std::vector<double> default_sigma_candidates(const PolarGrid& grid, int count) {
    const double lo = std::max(grid.theta_spacing(), 1e-9);
    const double hi = std::max(0.5 * (grid.thetas.back() - grid.thetas.front()), lo * 2.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double frac = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        out.push_back(lo * std::pow(hi / lo, frac));
    }
    return out;
}

} // namespace sar
