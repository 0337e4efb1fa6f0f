#include "sar/dataset.hpp"

#include "sar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
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

/// Greedy nearest-to-target selection: picks `count` distinct record indices
/// whose azimuths best match equally spaced targets starting at `offset`.
std::vector<std::size_t> select_uniform(const std::vector<const DatasetRecord*>& records,
                                        std::size_t count, double offset) {
    std::vector<bool> used(records.size(), false);
    std::vector<std::size_t> picked;
    picked.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double target =
            normalize_azimuth(offset + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count));
        std::size_t best = records.size();
        double best_dist = 0.0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (used[i]) continue;
            const double d = circular_distance(records[i]->azimuth_rad, target);
            if (best == records.size() || d < best_dist ||
                (d == best_dist && records[i]->azimuth_rad < records[best]->azimuth_rad)) {
                best = i;
                best_dist = d;
            }
        }
        if (best == records.size()) break;
        used[best] = true;
        picked.push_back(best);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::map<int, std::vector<const DatasetRecord*>> by_class(const std::vector<DatasetRecord>& records) {
    std::map<int, std::vector<const DatasetRecord*>> classes;
    for (const auto& r : records) classes[r.class_id].push_back(&r);
    for (auto& [id, list] : classes) {
        std::stable_sort(list.begin(), list.end(), [](const DatasetRecord* a, const DatasetRecord* b) {
            return a->azimuth_rad < b->azimuth_rad;
        });
    }
    return classes;
}

double seed_offset(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * kPi);
    return uniform(rng);
}

} // namespace

double normalize_azimuth(double theta_rad) {
    double t = std::fmod(theta_rad, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    if (t == 2.0 * kPi) t = 0.0;
    return t;
}

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::flip: return "flip";
        case Provenance::pose: return "pose";
        case Provenance::subpixel: return "subpixel";
        case Provenance::pose_subpixel: return "pose+subpixel";
        case Provenance::rotation: return "rotation";
        case Provenance::linear_interp: return "linear-interp";
    }
    return "original";
}

Provenance provenance_from_name(const std::string& name) {
    for (Provenance p : {Provenance::original, Provenance::flip, Provenance::pose,
                         Provenance::subpixel, Provenance::pose_subpixel, Provenance::rotation,
                         Provenance::linear_interp}) {
        if (provenance_name(p) == name) return p;
    }
    throw std::invalid_argument("unknown provenance '" + name + "'");
}

const std::array<std::string, kNumClasses>& class_names() {
    static const std::array<std::string, kNumClasses> names = {
        "2S1", "BMP2", "BRDM2", "BTR60", "BTR70", "D7", "T62", "T72", "ZIL131", "ZSU234"};
    return names;
}

int class_id_from_name(const std::string& name) {
    const auto& names = class_names();
    for (int i = 0; i < kNumClasses; ++i) {
        if (names[static_cast<std::size_t>(i)] == name) return i;
    }
    return -1;
}

LabelSet derive_labels(int class_id, double theta_rad) {
    require(class_id >= 0 && class_id < kNumClasses, "derive_labels: class_id out of range");
    LabelSet labels;
    labels.y1.fill(0.0);
    labels.y1[static_cast<std::size_t>(class_id)] = 1.0;
    labels.y2 = std::sin(theta_rad);
    // normalize into (-pi, pi]; the half-plane set is boundary inclusive
    double t = std::fmod(theta_rad, 2.0 * kPi);
    if (t > kPi) t -= 2.0 * kPi;
    if (t <= -kPi) t += 2.0 * kPi;
    labels.y3 = (t >= -kPi / 2.0 && t <= kPi / 2.0) ? 1 : 0;
    return labels;
}

LossBreakdown multitask_loss(const Prediction& pred, const LabelSet& labels) {
    static constexpr double kEps = 1e-12;
    double simplex_sum = 0.0;
    for (double p : pred.y1) simplex_sum += p;
    require(std::abs(simplex_sum - 1.0) <= 1e-6, "multitask_loss: class prediction must sum to 1");

    LossBreakdown loss;
    auto clamp01 = [&loss](double p) {
        if (p < kEps || p > 1.0 - kEps) {
            loss.clamped = true;
            return std::clamp(p, kEps, 1.0 - kEps);
        }
        return p;
    };

    for (std::size_t p = 0; p < kNumClasses; ++p) {
        if (labels.y1[p] != 0.0) loss.l1 -= labels.y1[p] * std::log(clamp01(pred.y1[p]));
    }
    const double d = labels.y2 - pred.y2;
    loss.l2 = d * d;
    const double q = clamp01(pred.y3);
    loss.l3 = -static_cast<double>(labels.y3) * std::log(q) -
              (1.0 - static_cast<double>(labels.y3)) * std::log(1.0 - q);
    loss.total = loss.l1 + loss.l2 + loss.l3;
    return loss;
}

void SplitSpec::validate() const {
    require(ratio > 0.0 && ratio <= 1.0, "SplitSpec: ratio must be in (0, 1]");
    require(val_fraction >= 0.0 && val_fraction < 1.0, "SplitSpec: val_fraction must be in [0, 1)");
}

std::vector<DatasetRecord> subsample(const std::vector<DatasetRecord>& records,
                                     const SplitSpec& spec) {
    spec.validate();
    require(!records.empty(), "subsample: empty record list");
    const double offset = seed_offset(spec.seed);

    std::vector<DatasetRecord> out;
    for (auto& [class_id, list] : by_class(records)) {
        require(!list.empty(), "subsample: empty class");
        const auto keep =
            static_cast<std::size_t>(std::lround(spec.ratio * static_cast<double>(list.size())));
        for (std::size_t i : select_uniform(list, keep, offset)) out.push_back(*list[i]);
    }
    return out;
}

TrainValSplit split_train_val(const std::vector<DatasetRecord>& records, double val_fraction,
                              std::uint64_t seed) {
    require(!records.empty(), "split_train_val: empty record list");
    require(val_fraction >= 0.0 && val_fraction < 1.0, "split_train_val: bad val_fraction");
    const double offset = seed_offset(seed);

    TrainValSplit split;
    for (auto& [class_id, list] : by_class(records)) {
        std::size_t n_val =
            static_cast<std::size_t>(std::lround(val_fraction * static_cast<double>(list.size())));
        if (list.size() < 2) {
            n_val = 0;
            split.classes_without_val.push_back(class_id);
        }
        const auto picked = select_uniform(list, n_val, offset);
        std::vector<bool> is_val(list.size(), false);
        for (std::size_t i : picked) is_val[i] = true;
        for (std::size_t i = 0; i < list.size(); ++i)
            (is_val[i] ? split.val : split.train).push_back(*list[i]);
    }
    return split;
}

DatasetRecord flip_cross_range(const DatasetRecord& record) {
    DatasetRecord out = record;
    out.image.data = record.image.data.rowwise().reverse();
    out.azimuth_rad = normalize_azimuth(2.0 * kPi - record.azimuth_rad);
    out.provenance = Provenance::flip;
    return out;
}

ComplexImage pixel_translate(const ComplexImage& img, int dx, int dy, bool strict, bool* flagged) {
    static constexpr int kAllowed[] = {-6, -4, -2, 0, 2, 4, 6};
    auto allowed = [](int v) {
        return std::find(std::begin(kAllowed), std::end(kAllowed), v) != std::end(kAllowed);
    };
    if (flagged) *flagged = false;
    if (!allowed(dx) || !allowed(dy)) {
        if (strict)
            throw std::invalid_argument("pixel_translate: shift outside {-6,-4,-2,0,2,4,6}");
        if (flagged) *flagged = true;
    }

    const Eigen::Index nr = img.rows(), nc = img.cols();
    auto wrap = [](Eigen::Index v, Eigen::Index n) { return ((v % n) + n) % n; };
    ComplexImage out;
    out.pixel_spacing_m = img.pixel_spacing_m;
    out.data.resize(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c)
            out.data(r, c) = img.data(wrap(r - dy, nr), wrap(c - dx, nc));
    return out;
}

} // namespace sar
