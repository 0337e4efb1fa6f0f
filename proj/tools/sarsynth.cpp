// Batch front-end: ingest, dataset protocol, model fitting, pose synthesis,
// baselines, phantom fixtures and quick-look rendering.

#include "sar/baseline.hpp"
#include "sar/container.hpp"
#include "sar/dataset.hpp"
#include "sar/geometry.hpp"
#include "sar/mstar.hpp"
#include "sar/parallel.hpp"
#include "sar/phantom.hpp"
#include "sar/quicklook.hpp"
#include "sar/synthesis.hpp"
#include "sar/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    double center_frequency_hz = 9.3e9;
    double elevation_deg = 0.0;

    std::string window_family = "taylor";
    int window_nbar = 4;
    double window_sll_db = -35.0;
    double zero_pad_factor = 1.0;

    double lambda_rel = 0.05;
    int max_iters = 2000;
    double rel_tol = 1e-6;
    std::vector<double> sigma_candidates_deg;
    int basis_size = 12;

    double eta = 3.0;
    double r_cap_deg = 6.0;
    double subaperture_deg = 3.0;
    int pulses = 100;
    double step_deg = 1.0;
    double dedup_deg = 0.5;
    bool symmetric = true;
    std::vector<std::pair<double, double>> subpixel_shifts;

    double ratio = 1.0;
    double val_fraction = 0.15;
    std::uint64_t seed = 0;

    int jobs = 0;
    bool exact_transform = false;
};

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json doc = json::parse(in);

    auto get = [&doc](const char* section, const char* key, auto& out) {
        if (doc.contains(section) && doc[section].contains(key))
            out = doc[section][key].get<std::decay_t<decltype(out)>>();
    };
    get("radar", "center_frequency_hz", cfg.center_frequency_hz);
    get("radar", "elevation_deg", cfg.elevation_deg);
    get("window", "family", cfg.window_family);
    get("window", "nbar", cfg.window_nbar);
    get("window", "sidelobe_db", cfg.window_sll_db);
    get("window", "zero_pad_factor", cfg.zero_pad_factor);
    get("solver", "lambda_rel", cfg.lambda_rel);
    get("solver", "max_iters", cfg.max_iters);
    get("solver", "rel_tol", cfg.rel_tol);
    get("solver", "sigma_candidates_deg", cfg.sigma_candidates_deg);
    get("solver", "basis_size", cfg.basis_size);
    get("synthesis", "eta", cfg.eta);
    get("synthesis", "r_cap_deg", cfg.r_cap_deg);
    get("synthesis", "subaperture_deg", cfg.subaperture_deg);
    get("synthesis", "pulses", cfg.pulses);
    get("synthesis", "step_deg", cfg.step_deg);
    get("synthesis", "dedup_deg", cfg.dedup_deg);
    get("synthesis", "symmetric", cfg.symmetric);
    if (doc.contains("synthesis") && doc["synthesis"].contains("subpixel_shifts_m")) {
        cfg.subpixel_shifts.clear();
        for (const auto& item : doc["synthesis"]["subpixel_shifts_m"])
            cfg.subpixel_shifts.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
    }
    get("dataset", "ratio", cfg.ratio);
    get("dataset", "val_fraction", cfg.val_fraction);
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
    if (doc.contains("exact_transform")) cfg.exact_transform = doc["exact_transform"].get<bool>();
}

sar::WindowSpec window_spec(const RunConfig& cfg) {
    sar::WindowSpec w;
    w.family = (cfg.window_family == "rect") ? sar::WindowFamily::rect : sar::WindowFamily::taylor;
    w.nbar = cfg.window_nbar;
    w.sidelobe_db = cfg.window_sll_db;
    w.zero_pad_factor = cfg.zero_pad_factor;
    return w;
}

sar::AugmentContext augment_context(const RunConfig& cfg) {
    sar::AugmentContext ctx;
    ctx.params.center_frequency_hz = cfg.center_frequency_hz;
    ctx.params.bandwidth_hz = 1.0; // derived per chip from pixel spacing
    ctx.params.elevation_rad = sar::deg2rad(cfg.elevation_deg);
    ctx.params.aperture_width_rad = sar::deg2rad(cfg.subaperture_deg);
    ctx.params.pulses_per_aperture = cfg.pulses;
    ctx.window = window_spec(cfg);
    ctx.synth.eta = cfg.eta;
    ctx.synth.r_cap_rad = sar::deg2rad(cfg.r_cap_deg);
    ctx.synth.subaperture_rad = sar::deg2rad(cfg.subaperture_deg);
    ctx.synth.pulses = cfg.pulses;
    ctx.synth.step_rad = sar::deg2rad(cfg.step_deg);
    ctx.synth.dedup_tol_rad = sar::deg2rad(cfg.dedup_deg);
    ctx.synth.symmetric = cfg.symmetric;
    ctx.synth.subpixel_shifts_m = cfg.subpixel_shifts;
    ctx.solver.max_iters = cfg.max_iters;
    ctx.solver.rel_tol = cfg.rel_tol;
    ctx.solver.jobs = cfg.jobs;
    ctx.lambda_rel = cfg.lambda_rel;
    for (double deg : cfg.sigma_candidates_deg) ctx.sigma_candidates.push_back(sar::deg2rad(deg));
    ctx.basis_size = cfg.basis_size;
    ctx.transform.mode = cfg.exact_transform ? sar::TransformMode::exact : sar::TransformMode::fast;
    ctx.transform.jobs = cfg.jobs;
    return ctx;
}

std::vector<fs::path> gather_inputs(const std::vector<std::string>& inputs, const char* extension) {
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        fs::path p(input);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && (!extension || entry.path().extension() == extension))
                    files.push_back(entry.path());
            }
        } else if (fs::exists(p)) {
            files.push_back(p);
        } else {
            throw std::runtime_error("input does not exist: " + input);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

json manifest_row(const std::string& file, const sar::DatasetRecord& r, const std::string& split) {
    json row;
    row["file"] = file;
    row["class_id"] = r.class_id;
    row["azimuth_deg"] = sar::rad2deg(r.azimuth_rad);
    row["depression_deg"] = sar::rad2deg(r.depression_rad);
    row["provenance"] = sar::provenance_name(r.provenance);
    row["split"] = split;
    row["source_id"] = r.source_id;
    return row;
}

void write_manifest(const fs::path& path, const std::vector<json>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest " + path.string());
    for (const auto& row : rows) out << row.dump() << "\n";
}

// Keeps only record-kind containers (directories may also hold models or
// phase histories).
std::vector<fs::path> filter_record_files(const std::vector<fs::path>& files) {
    std::vector<fs::path> kept;
    for (const auto& f : files) {
        if (sar::container_kind(sar::read_binary_file(f.string())) == "record")
            kept.push_back(f);
    }
    return kept;
}

std::vector<sar::RecordContainer> load_records(const std::vector<fs::path>& files) {
    std::vector<sar::RecordContainer> records;
    records.reserve(files.size());
    for (const auto& f : files)
        records.push_back(sar::deserialize_record(sar::read_binary_file(f.string())));
    return records;
}

int report_failures(std::size_t failed, std::size_t total) {
    if (failed != 0) std::cerr << failed << " of " << total << " inputs failed\n";
    if (total != 0 && failed == total) return 1;
    return 0;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const std::vector<std::string>& inputs, const std::string& out_dir) {
    const auto files = gather_inputs(inputs, nullptr);
    if (files.empty()) throw std::runtime_error("ingest: no input files");
    fs::create_directories(out_dir);

    std::vector<json> rows;
    std::size_t failed = 0;
    for (const auto& f : files) {
        try {
            sar::MstarChip chip = sar::read_mstar_file(f.string());
            if (chip.record.source_id.empty()) chip.record.source_id = f.filename().string();
            sar::RecordContainer rc{chip.record, std::nullopt};
            const std::string name = f.stem().string() + ".sarc";
            sar::write_binary_file((fs::path(out_dir) / name).string(), sar::serialize_record(rc));
            rows.push_back(manifest_row(name, chip.record, "none"));
        } catch (const std::exception& e) {
            ++failed;
            std::cerr << "ingest: " << f << ": " << e.what() << "\n";
        }
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "ingested " << rows.size() << " chips\n";
    return report_failures(failed, files.size());
}

// ---------------------------------------------------------------- dataset

int cmd_dataset(const RunConfig& cfg, const std::vector<std::string>& inputs,
                const std::string& out_dir) {
    const auto files = filter_record_files(gather_inputs(inputs, ".sarc"));
    if (files.empty()) throw std::runtime_error("dataset: no input records");
    fs::create_directories(out_dir);

    std::vector<sar::DatasetRecord> corpus;
    for (auto& rc : load_records(files)) corpus.push_back(std::move(rc.record));
    for (const auto& r : corpus) {
        if (r.class_id < 0) throw std::runtime_error("dataset: record with unknown class");
    }

    sar::SplitSpec spec;
    spec.ratio = cfg.ratio;
    spec.val_fraction = cfg.val_fraction;
    spec.seed = cfg.seed;
    const auto sampled = sar::subsample(corpus, spec);
    auto split = sar::split_train_val(sampled, cfg.val_fraction, cfg.seed);
    for (int class_id : split.classes_without_val)
        std::cerr << "dataset: class " << class_id << " has no validation records\n";

    // flip augmentation doubles both splits
    std::vector<json> rows;
    int counter = 0;
    auto emit = [&](const sar::DatasetRecord& r, const std::string& split_name) {
        std::ostringstream name;
        name << "rec" << std::setw(5) << std::setfill('0') << counter++ << ".sarc";
        sar::write_binary_file((fs::path(out_dir) / name.str()).string(),
                               sar::serialize_record(sar::RecordContainer{r, std::nullopt}));
        rows.push_back(manifest_row(name.str(), r, split_name));
    };
    for (const auto& r : split.train) {
        emit(r, "train");
        emit(sar::flip_cross_range(r), "train");
    }
    for (const auto& r : split.val) {
        emit(r, "val");
        emit(sar::flip_cross_range(r), "val");
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "dataset: " << 2 * split.train.size() << " train, " << 2 * split.val.size()
              << " val records\n";
    return 0;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const RunConfig& cfg, const std::vector<std::string>& inputs,
            const std::string& out_dir) {
    const auto files = filter_record_files(gather_inputs(inputs, ".sarc"));
    if (files.empty()) throw std::runtime_error("fit: no input records");
    fs::create_directories(out_dir);
    const sar::AugmentContext ctx = augment_context(cfg);

    struct Item {
        std::string model_bytes;
        json report;
        bool ok = false;
        std::string error;
    };
    std::vector<Item> items(files.size());
    sar::parallel_for(files.size(), [&](std::size_t i) {
        Item& item = items[i];
        try {
            const auto rc = sar::deserialize_record(sar::read_binary_file(files[i].string()));
            sar::ComplexImage chip = rc.record.image;
            if (chip.rows() != chip.cols()) {
                const Eigen::Index n = std::min(chip.rows(), chip.cols());
                chip = sar::crop_center(chip, n, n);
            }
            sar::AugmentContext local = ctx;
            if (rc.record.center_frequency_hz > 0.0)
                local.params.center_frequency_hz = rc.record.center_frequency_hz;
            local.solver.jobs = 1;
            local.transform.jobs = 1;
            const sar::FitReport report =
                sar::fit_image_model(chip, rc.record.azimuth_rad, rc.record.depression_rad, local);
            item.model_bytes = sar::serialize_model(report.model);
            item.report["file"] = files[i].stem().string() + "_model.sarc";
            item.report["sigma_g_deg"] = sar::rad2deg(report.model.sigma_g());
            item.report["lambda"] = report.model.meta.lambda;
            item.report["objective"] = report.model.meta.objective_trace.back();
            item.report["residual_fro"] = report.model.meta.residual_fro;
            item.report["iterations"] = report.iterations;
            item.report["converged"] = report.model.meta.converged;
            item.ok = true;
        } catch (const std::exception& e) {
            item.error = e.what();
        }
    }, cfg.jobs);

    std::vector<json> rows;
    std::size_t failed = 0;
    std::ofstream report_out(fs::path(out_dir) / "fit_report.jsonl", std::ios::binary);
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (!items[i].ok) {
            ++failed;
            std::cerr << "fit: " << files[i] << ": " << items[i].error << "\n";
            continue;
        }
        const std::string name = files[i].stem().string() + "_model.sarc";
        sar::write_binary_file((fs::path(out_dir) / name).string(), items[i].model_bytes);
        report_out << items[i].report.dump() << "\n";
        std::cout << name << " sigma_g=" << items[i].report["sigma_g_deg"]
                  << " deg residual=" << items[i].report["residual_fro"] << "\n";
    }
    return report_failures(failed, files.size());
}

// ---------------------------------------------------------------- synthesize

int cmd_synthesize(const RunConfig& cfg, const std::vector<std::string>& inputs,
                   const std::string& out_dir, const std::vector<double>& thetas_deg) {
    std::vector<fs::path> files;
    for (const auto& f : gather_inputs(inputs, ".sarc"))
        if (sar::container_kind(sar::read_binary_file(f.string())) == "model") files.push_back(f);
    if (files.empty()) throw std::runtime_error("synthesize: no model files");
    fs::create_directories(out_dir);
    const sar::AugmentContext ctx = augment_context(cfg);

    std::vector<json> rows;
    std::size_t failed = 0;
    for (const auto& f : files) {
        try {
            const sar::ScatteringModel model =
                sar::deserialize_model(sar::read_binary_file(f.string()));
            sar::PolarGrid freq_source;
            freq_source.thetas = {model.theta_center};
            freq_source.freqs = sar::linspace(
                model.freq_start_hz,
                model.freq_start_hz + model.freq_step_hz * (model.freq_count - 1),
                static_cast<std::size_t>(model.freq_count));
            freq_source.elevation_rad = model.elevation_rad;
            freq_source.theta_look = model.theta_look;
            int idx = 0;
            for (double deg : thetas_deg) {
                sar::SyntheticRecord rec = sar::synthesize_pose(
                    model, sar::deg2rad(deg), ctx.synth, freq_source, ctx.window, ctx.transform);
                rec.image = sar::normalize_unit_norm(rec.image);
                sar::DatasetRecord source;
                source.source_id = f.stem().string();
                source.depression_rad = model.elevation_rad;
                const auto rc = sar::to_record_container(rec, source);
                std::ostringstream name;
                name << f.stem().string() << "_pose" << std::setw(3) << std::setfill('0') << idx++
                     << ".sarc";
                sar::write_binary_file((fs::path(out_dir) / name.str()).string(),
                                       sar::serialize_record(rc));
                rows.push_back(manifest_row(name.str(), rc.record, "none"));
            }
        } catch (const std::exception& e) {
            ++failed;
            std::cerr << "synthesize: " << f << ": " << e.what() << "\n";
        }
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "synthesized " << rows.size() << " poses\n";
    return report_failures(failed, files.size());
}

// ---------------------------------------------------------------- shift

int cmd_shift(const RunConfig& cfg, const std::vector<std::string>& inputs,
              const std::string& out_dir) {
    const auto files = filter_record_files(gather_inputs(inputs, ".sarc"));
    if (files.empty()) throw std::runtime_error("shift: no input records");
    if (cfg.subpixel_shifts.empty()) throw std::runtime_error("shift: no --subpixel shifts given");
    fs::create_directories(out_dir);

    std::vector<json> rows;
    std::size_t failed = 0;
    for (const auto& f : files) {
        try {
            const auto rc = sar::deserialize_record(sar::read_binary_file(f.string()));
            int idx = 0;
            for (const auto& [dx, dy] : cfg.subpixel_shifts) {
                sar::RecordContainer out = rc;
                out.record.image =
                    sar::normalize_unit_norm(sar::subpixel_shift(rc.record.image, dx, dy));
                out.record.provenance = sar::Provenance::subpixel;
                sar::SynthesisMeta meta;
                meta.source_azimuth_rad = rc.record.azimuth_rad;
                meta.shift_dx_m = dx;
                meta.shift_dy_m = dy;
                out.synthesis = meta;
                std::ostringstream name;
                name << f.stem().string() << "_shift" << std::setw(2) << std::setfill('0') << idx++
                     << ".sarc";
                sar::write_binary_file((fs::path(out_dir) / name.str()).string(),
                                       sar::serialize_record(out));
                rows.push_back(manifest_row(name.str(), out.record, "none"));
            }
        } catch (const std::exception& e) {
            ++failed;
            std::cerr << "shift: " << f << ": " << e.what() << "\n";
        }
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "shifted " << rows.size() << " records\n";
    return report_failures(failed, files.size());
}

// ---------------------------------------------------------------- baseline

int cmd_baseline(const std::vector<std::string>& inputs, const std::string& out_dir,
                 const std::string& kind, const std::vector<double>& thetas_deg) {
    const auto files = filter_record_files(gather_inputs(inputs, ".sarc"));
    if (files.empty()) throw std::runtime_error("baseline: no input records");
    fs::create_directories(out_dir);

    auto records = load_records(files);
    std::vector<double> azimuths;
    for (const auto& rc : records) azimuths.push_back(rc.record.azimuth_rad);

    std::vector<json> rows;
    int counter = 0;
    for (double deg : thetas_deg) {
        const double theta_c = sar::deg2rad(deg);
        sar::RecordContainer out;
        if (kind == "rotation") {
            // closest single pose, rotated into place
            auto dist = [&](std::size_t j) {
                double d = std::fmod(std::abs(records[j].record.azimuth_rad - theta_c), 2.0 * sar::kPi);
                return std::min(d, 2.0 * sar::kPi - d);
            };
            std::size_t best = 0;
            for (std::size_t i = 1; i < records.size(); ++i)
                if (dist(i) < dist(best)) best = i;
            out = records[best];
            out.record.image = sar::normalize_unit_norm(sar::rotate_pose(
                records[best].record.image, records[best].record.azimuth_rad, theta_c));
            out.record.provenance = sar::Provenance::rotation;
            sar::SynthesisMeta meta;
            meta.source_azimuth_rad = records[best].record.azimuth_rad;
            out.synthesis = meta;
        } else if (kind == "linear-interp") {
            if (records.size() < 2) throw std::runtime_error("baseline: need >= 2 records");
            const auto [ta, tb] = sar::nearest_poses(azimuths, theta_c);
            auto find = [&](double t) -> const sar::RecordContainer& {
                for (const auto& rc : records)
                    if (rc.record.azimuth_rad == t) return rc;
                throw std::logic_error("baseline: pose lookup failed");
            };
            const auto& ra = find(ta);
            const auto& rb = find(tb);
            sar::PoseNeighborhood nbr{ta, ra.record.image, tb, rb.record.image};
            out = ra;
            out.record.image = sar::normalize_unit_norm(sar::linear_interp_pose(nbr, theta_c));
            out.record.provenance = sar::Provenance::linear_interp;
            sar::SynthesisMeta meta;
            meta.source_azimuth_rad = ta;
            out.synthesis = meta;
        } else {
            throw std::runtime_error("baseline: unknown kind '" + kind + "'");
        }
        out.record.azimuth_rad = sar::normalize_azimuth(theta_c);
        std::ostringstream name;
        name << "baseline_" << kind << "_" << std::setw(3) << std::setfill('0') << counter++
             << ".sarc";
        sar::write_binary_file((fs::path(out_dir) / name.str()).string(),
                               sar::serialize_record(out));
        rows.push_back(manifest_row(name.str(), out.record, "none"));
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "baseline(" << kind << "): " << rows.size() << " records\n";
    return 0;
}

// ---------------------------------------------------------------- phantom

int cmd_phantom(const RunConfig& cfg, const std::string& scene_path, int count, int scatterers,
                int size, double pixel_spacing, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const sar::WindowSpec window = window_spec(cfg);

    std::vector<sar::SceneDescription> scenes;
    std::vector<double> azimuths_deg;
    if (!scene_path.empty()) {
        scenes.push_back(sar::read_scene(scene_path));
        azimuths_deg.push_back(0.0);
    } else {
        std::mt19937_64 rng(cfg.seed);
        const double extent = size * pixel_spacing;
        std::uniform_real_distribution<double> coord(-0.35 * extent, 0.35 * extent);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * sar::kPi);
        std::uniform_real_distribution<double> amp(0.5, 2.0);
        std::uniform_real_distribution<double> width(0.8, 2.0);
        std::uniform_real_distribution<double> azim(0.0, 360.0);
        std::uniform_real_distribution<double> center_jitter(-0.5, 0.5);
        for (int s = 0; s < count; ++s) {
            sar::SceneDescription scene;
            scene.extent_m = extent;
            scene.elevation_rad = sar::deg2rad(cfg.elevation_deg);
            const double az = azim(rng);
            for (int k = 0; k < scatterers; ++k) {
                sar::Scatterer sc;
                sc.x_m = coord(rng);
                sc.y_m = coord(rng);
                sc.amplitude = std::polar(amp(rng), phase(rng));
                sc.profile = sar::PersistenceProfile::gaussian;
                sc.theta0_rad = sar::deg2rad(az + center_jitter(rng));
                sc.width_rad = sar::deg2rad(width(rng));
                scene.scatterers.push_back(sc);
            }
            scenes.push_back(scene);
            azimuths_deg.push_back(az);
        }
    }

    std::vector<json> rows;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
        const double az_rad = sar::deg2rad(azimuths_deg[s]);
        sar::RadarParams params;
        params.center_frequency_hz = cfg.center_frequency_hz;
        params.bandwidth_hz = sar::kSpeedOfLight / (2.0 * pixel_spacing * window.zero_pad_factor);
        params.elevation_rad = scenes[s].elevation_rad;
        params.aperture_width_rad = sar::deg2rad(cfg.subaperture_deg);
        params.pulses_per_aperture = cfg.pulses;
        const double extent = size * pixel_spacing;
        const sar::PolarGrid grid = sar::make_polar_grid(params, extent, az_rad);

        const sar::PhaseHistory ph = sar::simulate_measurements(scenes[s], grid);
        sar::TransformOptions topts;
        topts.mode = cfg.exact_transform ? sar::TransformMode::exact : sar::TransformMode::fast;
        topts.jobs = cfg.jobs;
        sar::ComplexImage img = sar::phase_history_to_image(ph, size, window, topts);

        std::ostringstream stem;
        stem << "phantom" << std::setw(3) << std::setfill('0') << s;
        sar::write_scene(scenes[s], (fs::path(out_dir) / (stem.str() + "_scene.json")).string());
        sar::write_binary_file((fs::path(out_dir) / (stem.str() + "_ph.sarc")).string(),
                               sar::serialize_phase_history(ph));
        sar::RecordContainer rc;
        rc.record.image = std::move(img);
        rc.record.class_id = static_cast<int>(s) % sar::kNumClasses;
        rc.record.azimuth_rad = sar::normalize_azimuth(az_rad);
        rc.record.depression_rad = scenes[s].elevation_rad;
        rc.record.provenance = sar::Provenance::original;
        rc.record.source_id = stem.str();
        rc.record.center_frequency_hz = params.center_frequency_hz;
        rc.record.bandwidth_hz = params.bandwidth_hz;
        sar::write_binary_file((fs::path(out_dir) / (stem.str() + ".sarc")).string(),
                               sar::serialize_record(rc));
        rows.push_back(manifest_row(stem.str() + ".sarc", rc.record, "none"));
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "phantom: " << scenes.size() << " scenes\n";
    return 0;
}

// ---------------------------------------------------------------- quicklook

int cmd_quicklook(const std::vector<std::string>& inputs, const std::string& out_dir,
                  double dynamic_range_db) {
    const auto files = gather_inputs(inputs, ".sarc");
    if (files.empty()) throw std::runtime_error("quicklook: no input containers");
    fs::create_directories(out_dir);

    std::size_t failed = 0, done = 0;
    for (const auto& f : files) {
        try {
            const std::string bytes = sar::read_binary_file(f.string());
            const std::string kind = sar::container_kind(bytes);
            sar::ComplexImage img;
            if (kind == "record") {
                img = sar::deserialize_record(bytes).record.image;
            } else if (kind == "phase_history") {
                img.data = sar::deserialize_phase_history(bytes).data;
            } else {
                throw std::runtime_error("no image payload in kind '" + kind + "'");
            }
            sar::write_quicklook(img, (fs::path(out_dir) / (f.stem().string() + ".pgm")).string(),
                                 dynamic_range_db);
            ++done;
        } catch (const std::exception& e) {
            ++failed;
            std::cerr << "quicklook: " << f << ": " << e.what() << "\n";
        }
    }
    std::cout << "quicklook: " << done << " images\n";
    return report_failures(failed, files.size());
}

// ---------------------------------------------------------------- augment

int cmd_augment(const RunConfig& cfg, const std::vector<std::string>& inputs,
                const std::string& out_dir) {
    const auto files = filter_record_files(gather_inputs(inputs, ".sarc"));
    if (files.empty()) throw std::runtime_error("augment: no input records");
    fs::create_directories(out_dir);
    const sar::AugmentContext ctx = augment_context(cfg);

    auto records = load_records(files);
    std::vector<double> existing;
    for (const auto& rc : records) existing.push_back(rc.record.azimuth_rad);

    struct Item {
        std::vector<std::pair<std::string, sar::RecordContainer>> outputs;
        bool ok = false;
        std::string error;
    };
    std::vector<Item> items(records.size());
    sar::parallel_for(records.size(), [&](std::size_t i) {
        Item& item = items[i];
        try {
            sar::AugmentContext local = ctx;
            if (records[i].record.center_frequency_hz > 0.0)
                local.params.center_frequency_hz = records[i].record.center_frequency_hz;
            local.solver.jobs = 1;
            local.transform.jobs = 1;
            const auto synthetics = sar::augment_record(records[i].record, existing, local);
            const std::string stem = files[i].stem().string();
            int idx = 0;
            for (const auto& rec : synthetics) {
                std::ostringstream name;
                name << stem << "_aug" << std::setw(3) << std::setfill('0') << idx++ << ".sarc";
                item.outputs.emplace_back(name.str(),
                                          sar::to_record_container(rec, records[i].record));
            }
            item.ok = true;
        } catch (const std::exception& e) {
            item.error = e.what();
        }
    }, cfg.jobs);

    std::vector<json> rows;
    std::size_t failed = 0;
    std::size_t pose_count = 0, shift_count = 0, pose_shift_count = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!items[i].ok) {
            ++failed;
            std::cerr << "augment: " << files[i] << ": " << items[i].error << "\n";
            continue;
        }
        for (const auto& [name, rc] : items[i].outputs) {
            sar::write_binary_file((fs::path(out_dir) / name).string(), sar::serialize_record(rc));
            rows.push_back(manifest_row(name, rc.record, "none"));
            switch (rc.record.provenance) {
                case sar::Provenance::pose: ++pose_count; break;
                case sar::Provenance::subpixel: ++shift_count; break;
                case sar::Provenance::pose_subpixel: ++pose_shift_count; break;
                default: break;
            }
        }
    }
    write_manifest(fs::path(out_dir) / "manifest.jsonl", rows);
    std::cout << "augment: " << pose_count << " pose, " << shift_count << " subpixel, "
              << pose_shift_count << " pose+subpixel records\n";
    return report_failures(failed, files.size());
}

std::pair<double, double> parse_shift(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("--subpixel expects 'dx,dy' in meters");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse scattering-model pose synthesis toolkit for complex SAR chips"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::vector<std::string> inputs;
    std::string out_dir = "out";
    std::vector<double> thetas_deg;
    std::vector<std::string> shift_args;
    std::string baseline_kind = "rotation";
    std::string scene_path;
    int phantom_count = 10, phantom_scatterers = 5, phantom_size = 32;
    double phantom_spacing = 0.3;
    double dynamic_range_db = 40.0;

    app.add_option("--config", config_path, "JSON config file; flags override its values");

    auto add_common = [&](CLI::App* sub, bool with_inputs = true) {
        if (with_inputs)
            sub->add_option("--input,-i", inputs, "input files or directories")->required();
        sub->add_option("--out,-o", out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "RNG seed recorded in manifests");
        sub->add_option("--jobs", cfg.jobs, "worker threads (0 = hardware)");
        sub->add_flag("--exact-transform", cfg.exact_transform,
                      "use the direct non-uniform transform instead of FFT resampling");
        sub->add_option("--window-nbar", cfg.window_nbar, "Taylor window nbar");
        sub->add_option("--window-sll-db", cfg.window_sll_db, "Taylor sidelobe level (dB, < 0)");
        sub->add_option("--window-family", cfg.window_family, "taylor|rect");
        sub->add_option("--zero-pad", cfg.zero_pad_factor, "zero-padding factor (>= 1)");
        sub->add_option("--center-frequency-hz", cfg.center_frequency_hz, "carrier frequency");
        sub->add_option("--elevation-deg", cfg.elevation_deg, "platform elevation angle");
    };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--lambda-rel", cfg.lambda_rel, "lambda as fraction of lambda_max");
        sub->add_option("--max-iters", cfg.max_iters, "solver iteration cap");
        sub->add_option("--rel-tol", cfg.rel_tol, "solver relative objective tolerance");
        sub->add_option("--sigma-deg", cfg.sigma_candidates_deg, "sigma_G candidates (degrees)");
        sub->add_option("--basis-size", cfg.basis_size, "number of azimuth kernels D");
        sub->add_option("--pulses", cfg.pulses, "pulses per aperture");
        sub->add_option("--subaperture-deg", cfg.subaperture_deg, "aperture width (degrees)");
    };
    auto add_synthesis = [&](CLI::App* sub) {
        sub->add_option("--eta", cfg.eta, "extrapolation factor on sigma_G");
        sub->add_option("--r-cap-deg", cfg.r_cap_deg, "extrapolation cap (degrees)");
        sub->add_option("--step-deg", cfg.step_deg, "pose emission step (degrees)");
        sub->add_option("--dedup-deg", cfg.dedup_deg, "dedup tolerance (degrees)");
        sub->add_option("--subpixel", shift_args, "sub-pixel shift 'dx,dy' meters (repeatable)");
        sub->add_flag("!--one-sided", cfg.symmetric, "extrapolate forward only");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "read Phoenix chips into record containers");
    add_common(ingest);
    CLI::App* dataset = app.add_subcommand("dataset", "subsample, split and flip-augment a corpus");
    add_common(dataset);
    dataset->add_option("--ratio", cfg.ratio, "per-class subsampling ratio");
    dataset->add_option("--val-fraction", cfg.val_fraction, "validation fraction");
    CLI::App* fit = app.add_subcommand("fit", "fit scattering models to chips");
    add_common(fit);
    add_solver(fit);
    CLI::App* synthesize = app.add_subcommand("synthesize", "evaluate models at new poses");
    add_common(synthesize);
    add_solver(synthesize);
    synthesize->add_option("--theta-deg", thetas_deg, "target poses (degrees)")->required();
    CLI::App* shift = app.add_subcommand("shift", "apply sub-pixel shifts to records");
    add_common(shift);
    shift->add_option("--subpixel", shift_args, "sub-pixel shift 'dx,dy' meters (repeatable)")
        ->required();
    CLI::App* baseline = app.add_subcommand("baseline", "rotation / linear-interp baselines");
    add_common(baseline);
    baseline->add_option("--kind", baseline_kind, "rotation|linear-interp");
    baseline->add_option("--theta-deg", thetas_deg, "target poses (degrees)")->required();
    CLI::App* phantom = app.add_subcommand("phantom", "emit synthetic scenes and fixtures");
    add_common(phantom, false);
    add_solver(phantom);
    phantom->add_option("--scene", scene_path, "scene JSON file (otherwise random scenes)");
    phantom->add_option("--count", phantom_count, "number of random scenes");
    phantom->add_option("--scatterers", phantom_scatterers, "scatterers per random scene");
    phantom->add_option("--size", phantom_size, "formed image size (pixels)");
    phantom->add_option("--pixel-spacing", phantom_spacing, "pixel spacing (meters)");
    CLI::App* quicklook = app.add_subcommand("quicklook", "render containers to 8-bit PGM");
    quicklook->add_option("--input,-i", inputs, "input containers")->required();
    quicklook->add_option("--out,-o", out_dir, "output directory");
    quicklook->add_option("--dynamic-range-db", dynamic_range_db, "dB window below peak");
    CLI::App* augment = app.add_subcommand("augment", "full pose + sub-pixel pipeline");
    add_common(augment);
    add_solver(augment);
    add_synthesis(augment);

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            // config file provides the base; command-line flags win
            RunConfig base;
            load_config_file(base, config_path);
            cfg = base;
            app.clear();
            app.parse(argc, argv);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        for (const auto& s : shift_args) cfg.subpixel_shifts.push_back(parse_shift(s));

        if (ingest->parsed()) return cmd_ingest(inputs, out_dir);
        if (dataset->parsed()) return cmd_dataset(cfg, inputs, out_dir);
        if (fit->parsed()) return cmd_fit(cfg, inputs, out_dir);
        if (synthesize->parsed()) return cmd_synthesize(cfg, inputs, out_dir, thetas_deg);
        if (shift->parsed()) return cmd_shift(cfg, inputs, out_dir);
        if (baseline->parsed()) return cmd_baseline(inputs, out_dir, baseline_kind, thetas_deg);
        if (phantom->parsed())
            return cmd_phantom(cfg, scene_path, phantom_count, phantom_scatterers, phantom_size,
                               phantom_spacing, out_dir);
        if (quicklook->parsed()) return cmd_quicklook(inputs, out_dir, dynamic_range_db);
        if (augment->parsed()) return cmd_augment(cfg, inputs, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
