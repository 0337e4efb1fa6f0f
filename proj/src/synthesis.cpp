#include "sar/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sar {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

} // namespace

void SynthesisConfig::validate() const {
    require(std::isfinite(eta) && eta > 0.0, "SynthesisConfig: eta must be > 0");
    require(std::isfinite(r_cap_rad) && r_cap_rad > 0.0, "SynthesisConfig: r_cap must be > 0");
    require(std::isfinite(subaperture_rad) && subaperture_rad > 0.0,
            "SynthesisConfig: subaperture width must be > 0");
    require(pulses >= 2, "SynthesisConfig: need at least 2 pulses");
    require(step_rad > 0.0, "SynthesisConfig: step must be > 0");
    require(dedup_tol_rad >= 0.0, "SynthesisConfig: dedup tolerance must be >= 0");
}

double extrapolation_span(double r_cap, double sigma_g, double eta) {
    require(r_cap >= 0.0 && sigma_g >= 0.0 && eta >= 0.0,
            "extrapolation_span: inputs must be >= 0");
    return std::min(r_cap, eta * sigma_g);
}

ComplexImage normalize_unit_norm(const ComplexImage& img) {
    const double norm = img.norm();
    require(norm > 0.0, "normalize_unit_norm: zero image");
    ComplexImage out;
    out.pixel_spacing_m = img.pixel_spacing_m;
    out.data = img.data / norm;
    return out;
}

SyntheticRecord synthesize_pose(const ScatteringModel& model, double theta_c,
                                const SynthesisConfig& cfg, const PolarGrid& grid,
                                const WindowSpec& window, const TransformOptions& topts) {
    cfg.validate();
    if (std::abs(theta_c - model.theta_center) > model.max_extrapolation + 1e-12)
        throw OutOfSpanError("synthesize_pose: pose outside the model's extrapolation span");

    const std::vector<double> thetas =
        linspace(theta_c - 0.5 * cfg.subaperture_rad, theta_c + 0.5 * cfg.subaperture_rad,
                 static_cast<std::size_t>(cfg.pulses));
    PhaseHistory ph = evaluate_model(model, thetas, grid.freqs, topts.jobs);
    // form the image in the synthesized aperture's own look frame
    ph.grid.theta_look = theta_c;

    int out_size = cfg.out_size;
    if (out_size <= 0)
        out_size = static_cast<int>(std::lround(
            window.zero_pad_factor * static_cast<double>(std::max(ph.grid.num_pulses(), ph.grid.num_freqs()))));

    SyntheticRecord rec;
    rec.image = phase_history_to_image(ph, out_size, window, topts);
    rec.azimuth_rad = theta_c;
    rec.source_azimuth_rad = model.theta_center;
    rec.kind = Provenance::pose;
    rec.sigma_g_rad = model.sigma_g();
    rec.lambda = model.meta.lambda;
    rec.delta_theta_rad = model.max_extrapolation;
    return rec;
}

std::vector<double> candidate_poses(double source_azimuth, double span, double step,
                                    const std::vector<double>& existing, double dedup_tol,
                                    bool symmetric) {
    require(step > 0.0, "candidate_poses: step must be > 0");
    std::vector<double> poses;
    const int k_max = static_cast<int>(std::floor(span / step + 1e-9));
    for (int k = k_max; k >= 1; --k) {
        if (symmetric) poses.push_back(source_azimuth - static_cast<double>(k) * step);
    }
    for (int k = 1; k <= k_max; ++k) poses.push_back(source_azimuth + static_cast<double>(k) * step);

    std::vector<double> kept;
    for (double pose : poses) {
        bool clash = false;
        for (double ex : existing) {
            if (circular_distance(pose, ex) < dedup_tol) {
                clash = true;
                break;
            }
        }
        if (!clash) kept.push_back(pose);
    }
    return kept;
}

FitReport fit_image_model(const ComplexImage& img, double azimuth_rad, double depression_rad,
                          const AugmentContext& ctx) {
    ctx.synth.validate();
    ctx.window.validate();
    require(img.rows() == img.cols(), "fit_image_model: chip must be square");
    require(img.rows() >= 2, "fit_image_model: chip too small");

    // Chip geometry fixes the band: pixel spacing = c/(2 B zero_pad).
    const double extent = static_cast<double>(img.rows()) * img.pixel_spacing_m;
    RadarParams params = ctx.params;
    params.bandwidth_hz = kSpeedOfLight / (2.0 * img.pixel_spacing_m * ctx.window.zero_pad_factor);
    params.elevation_rad = depression_rad;
    params.aperture_width_rad = ctx.synth.subaperture_rad;
    params.pulses_per_aperture = ctx.synth.pulses;

    const PolarGrid grid = make_polar_grid(params, extent, azimuth_rad);
    const SpatialGrid spatial = make_spatial_grid(params, extent);
    const PhaseHistory ph = image_to_phase_history(img, grid, ctx.window, ctx.transform);

    const std::vector<double> centers =
        make_basis_centers(azimuth_rad, 0.5 * ctx.synth.subaperture_rad, ctx.basis_size);
    std::vector<double> candidates = ctx.sigma_candidates;
    if (candidates.empty()) candidates = default_sigma_candidates(grid);

    // One lambda for the whole line search, anchored at the geometric-median
    // width so the per-sigma objectives stay comparable.
    std::vector<double> sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    const GaussianBasisSet anchor{centers, sorted[sorted.size() / 2]};
    const double lam_max = lambda_max(ph, spatial, anchor, ctx.solver.jobs);

    SolverOptions opts = ctx.solver;
    opts.lambda = ctx.lambda_rel * lam_max;
    SigmaSelection sel = select_sigma(ph, spatial, centers, candidates, opts);

    FitReport report;
    report.phase_history = ph;
    report.lambda_max_value = lam_max;
    report.iterations = sel.fit.iterations;

    ScatteringModel& model = report.model;
    model.spatial = spatial;
    model.basis = std::move(sel.basis);
    model.coeffs = std::move(sel.fit.coeffs);
    model.elevation_rad = grid.elevation_rad;
    model.theta_center = azimuth_rad;
    model.half_span = 0.5 * ctx.synth.subaperture_rad;
    model.max_extrapolation =
        extrapolation_span(ctx.synth.r_cap_rad, sel.sigma_rad, ctx.synth.eta);
    model.theta_look = grid.theta_look;
    model.freq_start_hz = grid.freqs.front();
    model.freq_step_hz = grid.freq_spacing();
    model.freq_count = static_cast<int>(grid.num_freqs());
    model.pulses = static_cast<int>(grid.num_pulses());
    model.meta.lambda = opts.lambda;
    model.meta.objective_trace = std::move(sel.fit.objective_trace);
    model.meta.residual_fro = sel.fit.residual_fro;
    model.meta.converged = sel.fit.converged;
    return report;
}

std::vector<SyntheticRecord> augment_record(const DatasetRecord& record,
                                            const std::vector<double>& existing_azimuths,
                                            const AugmentContext& ctx, FitReport* report_out) {
    ComplexImage chip = record.image;
    if (chip.rows() != chip.cols()) {
        const Eigen::Index n = std::min(chip.rows(), chip.cols());
        chip = crop_center(chip, n, n);
    }

    FitReport report = fit_image_model(chip, record.azimuth_rad, record.depression_rad, ctx);
    const ScatteringModel& model = report.model;
    const double span = model.max_extrapolation;

    std::vector<SyntheticRecord> out;
    SynthesisConfig cfg = ctx.synth;
    if (cfg.out_size <= 0) cfg.out_size = static_cast<int>(chip.rows());

    const std::vector<double> poses =
        candidate_poses(record.azimuth_rad, span, cfg.step_rad, existing_azimuths,
                        cfg.dedup_tol_rad, cfg.symmetric);
    for (double pose : poses) {
        SyntheticRecord rec =
            synthesize_pose(model, pose, cfg, report.phase_history.grid, ctx.window, ctx.transform);
        const ComplexImage raw = rec.image;
        rec.image = normalize_unit_norm(rec.image);
        out.push_back(rec);
        for (const auto& [dx, dy] : cfg.subpixel_shifts_m) {
            SyntheticRecord shifted = rec;
            shifted.kind = Provenance::pose_subpixel;
            shifted.shift_dx_m = dx;
            shifted.shift_dy_m = dy;
            shifted.image = normalize_unit_norm(subpixel_shift(raw, dx, dy));
            out.push_back(std::move(shifted));
        }
    }

    for (const auto& [dx, dy] : cfg.subpixel_shifts_m) {
        SyntheticRecord rec;
        rec.kind = Provenance::subpixel;
        rec.azimuth_rad = record.azimuth_rad;
        rec.source_azimuth_rad = record.azimuth_rad;
        rec.shift_dx_m = dx;
        rec.shift_dy_m = dy;
        rec.sigma_g_rad = model.sigma_g();
        rec.lambda = model.meta.lambda;
        rec.delta_theta_rad = span;
        rec.image = normalize_unit_norm(subpixel_shift(chip, dx, dy));
        out.push_back(std::move(rec));
    }

    if (report_out) *report_out = std::move(report);
    return out;
}

RecordContainer to_record_container(const SyntheticRecord& synthetic, const DatasetRecord& source) {
    RecordContainer rc;
    rc.record.image = synthetic.image;
    rc.record.class_id = source.class_id;
    rc.record.azimuth_rad = normalize_azimuth(synthetic.azimuth_rad);
    rc.record.depression_rad = source.depression_rad;
    rc.record.provenance = synthetic.kind;
    rc.record.source_id = source.source_id;
    rc.record.center_frequency_hz = source.center_frequency_hz;
    rc.record.bandwidth_hz = source.bandwidth_hz;
    SynthesisMeta meta;
    meta.source_azimuth_rad = synthetic.source_azimuth_rad;
    meta.shift_dx_m = synthetic.shift_dx_m;
    meta.shift_dy_m = synthetic.shift_dy_m;
    meta.sigma_g_rad = synthetic.sigma_g_rad;
    meta.lambda = synthetic.lambda;
    meta.delta_theta_rad = synthetic.delta_theta_rad;
    rc.synthesis = meta;
    return rc;
}

} // namespace sar
