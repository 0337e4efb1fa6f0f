#pragma once

#include "sar/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sar {

enum class Provenance {
    original,
    flip,
    pose,
    subpixel,
    pose_subpixel,
    rotation,
    linear_interp,
};

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

/// One labeled chip. Azimuth is kept normalized to [0, 2pi).
struct DatasetRecord {
    ComplexImage image;
    int class_id = -1; // 0..9, -1 = unknown
    double azimuth_rad = 0.0;
    double depression_rad = 0.0;
    Provenance provenance = Provenance::original;
    std::string source_id;
    // Radar metadata carried from chip headers when available (0 = unknown).
    double center_frequency_hz = 0.0;
    double bandwidth_hz = 0.0;
};

inline constexpr int kNumClasses = 10;

/// Class table of the ten-vehicle corpus, alphabetical order.
const std::array<std::string, kNumClasses>& class_names();
int class_id_from_name(const std::string& name); // -1 when unknown

struct LabelSet {
    std::array<double, kNumClasses> y1{}; // one-hot
    double y2 = 0.0;                      // sin(theta)
    int y3 = 0;                           // 1 iff theta in [-pi/2, pi/2] (mod 2pi)
};

/// y2 = sin(theta); y3 tests theta normalized to (-pi, pi], boundaries
/// inclusive.
LabelSet derive_labels(int class_id, double theta_rad);

struct LossBreakdown {
    double l1 = 0.0; // cross-entropy over classes
    double l2 = 0.0; // squared pose error
    double l3 = 0.0; // binary cross-entropy on the half-plane bit
    double total = 0.0;
    bool clamped = false; // predictions were clamped into [eps, 1-eps]
};

struct Prediction {
    std::array<double, kNumClasses> y1{}; // simplex
    double y2 = 0.0;
    double y3 = 0.5; // in (0,1)
};

LossBreakdown multitask_loss(const Prediction& pred, const LabelSet& labels);

struct SplitSpec {
    double ratio = 1.0;         // in (0, 1]
    double val_fraction = 0.15; // of the subsampled set
    std::uint64_t seed = 0;
    void validate() const;
};

/// Azimuth-uniform subsample: per class keeps round(ratio * n) records whose
/// azimuths are closest (greedy, each record once) to equally spaced targets.
std::vector<DatasetRecord> subsample(const std::vector<DatasetRecord>& records,
                                     const SplitSpec& spec);

struct TrainValSplit {
    std::vector<DatasetRecord> train, val;
    std::vector<int> classes_without_val; // classes with < 2 records
};

/// 15%-style validation split, azimuth-uniform per class; disjoint and
/// exhaustive.
TrainValSplit split_train_val(const std::vector<DatasetRecord>& records, double val_fraction,
                              std::uint64_t seed);

/// Cross-range mirror: reverses columns and maps theta to 2pi - theta.
DatasetRecord flip_cross_range(const DatasetRecord& record);

/// Integer circular pixel shift. Strict mode accepts only the training set
/// {-6,-4,-2,0,2,4,6}; lenient mode takes any integers and reports the
/// violation through `flagged`.
ComplexImage pixel_translate(const ComplexImage& img, int dx, int dy, bool strict = true,
                             bool* flagged = nullptr);

double normalize_azimuth(double theta_rad); // into [0, 2pi)

} // namespace sar
