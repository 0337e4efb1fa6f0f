#pragma once

#include "sar/container.hpp"
#include "sar/dataset.hpp"
#include "sar/scattering.hpp"
#include "sar/solver.hpp"
#include "sar/transform.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sar {

struct SynthesisConfig {
    double eta = 3.0;                        // extrapolation factor on sigma_G
    double r_cap_rad = deg2rad(6.0);         // hard cap on the pose offset
    double subaperture_rad = deg2rad(3.0);   // azimuth span of one formed image
    int pulses = 100;                        // pulses per synthesized aperture
    double step_rad = deg2rad(1.0);          // pose emission increment
    double dedup_tol_rad = deg2rad(0.5);     // skip poses this close to existing ones
    bool symmetric = true;                   // emit poses on both sides of the source
    std::vector<std::pair<double, double>> subpixel_shifts_m;
    int out_size = 0; // formed image size; 0 = natural (round(zero_pad * M))
    void validate() const;
};

/// Admissible pose offset: min(r_cap, eta * sigma_g).
double extrapolation_span(double r_cap, double sigma_g, double eta);

struct SyntheticRecord {
    ComplexImage image;
    double azimuth_rad = 0.0;
    double source_azimuth_rad = 0.0;
    Provenance kind = Provenance::pose;
    double shift_dx_m = 0.0, shift_dy_m = 0.0;
    double sigma_g_rad = 0.0;
    double lambda = 0.0;
    double delta_theta_rad = 0.0;
};

/// Scales to unit Frobenius norm; zero input is invalid.
ComplexImage normalize_unit_norm(const ComplexImage& img);

/// Evaluates the fitted model on a fresh aperture centered at theta_c (the
/// source chip's frequency axis is reused) and forms the image in the new
/// aperture's look frame.
SyntheticRecord synthesize_pose(const ScatteringModel& model, double theta_c,
                                const SynthesisConfig& cfg, const PolarGrid& grid,
                                const WindowSpec& window, const TransformOptions& topts = {});

/// Pose offsets emitted around a source azimuth: multiples of `step` within
/// +/- span, excluding anything within dedup_tol of an existing azimuth.
std::vector<double> candidate_poses(double source_azimuth, double span, double step,
                                    const std::vector<double>& existing, double dedup_tol,
                                    bool symmetric = true);

/// Shared configuration of the fit/synthesis pipeline.
struct AugmentContext {
    RadarParams params;          // center frequency etc.; bandwidth derived per chip
    WindowSpec window;
    SynthesisConfig synth;
    SolverOptions solver;        // solver.lambda ignored; lambda_rel applies
    double lambda_rel = 0.05;    // lambda as a fraction of lambda_max
    std::vector<double> sigma_candidates; // empty = default log-spaced grid
    int basis_size = 12;
    TransformOptions transform;
};

struct FitReport {
    ScatteringModel model;
    PhaseHistory phase_history;
    double lambda_max_value = 0.0;
    int iterations = 0;
};

/// Inverts a chip to phase history, line-searches sigma_G, fits the
/// coefficients, and assembles the model.
FitReport fit_image_model(const ComplexImage& img, double azimuth_rad, double depression_rad,
                          const AugmentContext& ctx);

/// Full per-record pipeline: fit, extrapolate poses, compose sub-pixel
/// shifts, unit-normalize every output.
std::vector<SyntheticRecord> augment_record(const DatasetRecord& record,
                                            const std::vector<double>& existing_azimuths,
                                            const AugmentContext& ctx,
                                            FitReport* report = nullptr);

RecordContainer to_record_container(const SyntheticRecord& synthetic, const DatasetRecord& source);

} // namespace sar
