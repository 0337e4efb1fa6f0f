#include "sar/container.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace sar {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kMagicLen = 6;

void append_payload(std::string& out, const CMatrix& data) {
    out.reserve(out.size() + 8 * static_cast<std::size_t>(data.size()));
    auto push_f32 = [&out](float v) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
        out.push_back(static_cast<char>(bits & 0xff));
        out.push_back(static_cast<char>((bits >> 8) & 0xff));
        out.push_back(static_cast<char>((bits >> 16) & 0xff));
        out.push_back(static_cast<char>((bits >> 24) & 0xff));
    };
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            push_f32(static_cast<float>(data(r, c).real()));
            push_f32(static_cast<float>(data(r, c).imag()));
        }
    }
}

float pop_f32(const unsigned char* p) {
    std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                         (static_cast<std::uint32_t>(p[1]) << 8) |
                         (static_cast<std::uint32_t>(p[2]) << 16) |
                         (static_cast<std::uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(bits);
}

CMatrix parse_payload(const std::string& bytes, std::size_t offset, Eigen::Index rows,
                      Eigen::Index cols) {
    const std::size_t need = 8 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (bytes.size() - offset != need)
        throw ContainerError("container: payload size does not match declared dimensions");
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
    CMatrix data(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double re = pop_f32(raw + 8 * i);
            const double im = pop_f32(raw + 8 * i + 4);
            data(r, c) = cdouble(re, im);
            ++i;
        }
    }
    return data;
}

struct ParsedHeader {
    json doc;
    std::size_t payload_offset = 0;
};

ParsedHeader parse_header(const std::string& bytes) {
    if (bytes.size() < kMagicLen || std::memcmp(bytes.data(), kContainerMagic, kMagicLen) != 0)
        throw ContainerError("container: bad magic");
    const auto line_end = bytes.find('\n', kMagicLen);
    if (line_end == std::string::npos) throw ContainerError("container: missing header line");
    ParsedHeader parsed;
    try {
        parsed.doc = json::parse(bytes.substr(kMagicLen, line_end - kMagicLen));
    } catch (const json::exception& e) {
        throw ContainerError(std::string("container: malformed header: ") + e.what());
    }
    if (parsed.doc.value("version", -1) != kContainerVersion)
        throw ContainerError("container: unsupported schema version");
    parsed.payload_offset = line_end + 1;
    return parsed;
}

std::string finish(const json& header, const CMatrix& payload) {
    std::string out(kContainerMagic, kMagicLen);
    out += header.dump();
    out += '\n';
    append_payload(out, payload);
    return out;
}

} // namespace

std::string container_kind(const std::string& bytes) {
    return parse_header(bytes).doc.value("kind", std::string());
}

std::string serialize_record(const RecordContainer& rc) {
    const DatasetRecord& r = rc.record;
    json h;
    h["version"] = kContainerVersion;
    h["kind"] = "record";
    h["rows"] = r.image.rows();
    h["cols"] = r.image.cols();
    h["pixel_spacing_m"] = r.image.pixel_spacing_m;
    h["azimuth_rad"] = r.azimuth_rad;
    h["depression_rad"] = r.depression_rad;
    h["class_id"] = r.class_id;
    h["provenance"] = provenance_name(r.provenance);
    h["source_id"] = r.source_id;
    h["center_frequency_hz"] = r.center_frequency_hz;
    h["bandwidth_hz"] = r.bandwidth_hz;
    if (rc.synthesis) {
        json s;
        s["source_azimuth_rad"] = rc.synthesis->source_azimuth_rad;
        s["shift_dx_m"] = rc.synthesis->shift_dx_m;
        s["shift_dy_m"] = rc.synthesis->shift_dy_m;
        s["sigma_g_rad"] = rc.synthesis->sigma_g_rad;
        s["lambda"] = rc.synthesis->lambda;
        s["delta_theta_rad"] = rc.synthesis->delta_theta_rad;
        h["synthesis"] = std::move(s);
    }
    return finish(h, r.image.data);
}

RecordContainer deserialize_record(const std::string& bytes) {
    const ParsedHeader parsed = parse_header(bytes);
    const json& h = parsed.doc;
    if (h.value("kind", std::string()) != "record")
        throw ContainerError("container: expected kind 'record'");

    RecordContainer rc;
    DatasetRecord& r = rc.record;
    const auto rows = h.at("rows").get<Eigen::Index>();
    const auto cols = h.at("cols").get<Eigen::Index>();
    if (rows < 1 || cols < 1) throw ContainerError("container: bad record dimensions");
    r.image.data = parse_payload(bytes, parsed.payload_offset, rows, cols);
    r.image.pixel_spacing_m = h.at("pixel_spacing_m").get<double>();
    r.azimuth_rad = h.at("azimuth_rad").get<double>();
    r.depression_rad = h.at("depression_rad").get<double>();
    r.class_id = h.at("class_id").get<int>();
    r.provenance = provenance_from_name(h.at("provenance").get<std::string>());
    r.source_id = h.at("source_id").get<std::string>();
    r.center_frequency_hz = h.at("center_frequency_hz").get<double>();
    r.bandwidth_hz = h.at("bandwidth_hz").get<double>();
    if (h.contains("synthesis")) {
        const json& s = h.at("synthesis");
        SynthesisMeta meta;
        meta.source_azimuth_rad = s.at("source_azimuth_rad").get<double>();
        meta.shift_dx_m = s.at("shift_dx_m").get<double>();
        meta.shift_dy_m = s.at("shift_dy_m").get<double>();
        meta.sigma_g_rad = s.at("sigma_g_rad").get<double>();
        meta.lambda = s.at("lambda").get<double>();
        meta.delta_theta_rad = s.at("delta_theta_rad").get<double>();
        rc.synthesis = meta;
    }
    return rc;
}

std::string serialize_model(const ScatteringModel& model) {
    model.validate();
    json h;
    h["version"] = kContainerVersion;
    h["kind"] = "model";
    h["d"] = model.basis.size();
    h["n_range"] = model.spatial.n_range;
    h["extent_m"] = model.spatial.extent_m;
    h["sigma_g_rad"] = model.basis.sigma_rad;
    h["centers_rad"] = model.basis.centers_rad;
    h["elevation_rad"] = model.elevation_rad;
    h["theta_center_rad"] = model.theta_center;
    h["half_span_rad"] = model.half_span;
    h["max_extrapolation_rad"] = model.max_extrapolation;
    h["theta_look_rad"] = model.theta_look;
    h["freq_start_hz"] = model.freq_start_hz;
    h["freq_step_hz"] = model.freq_step_hz;
    h["freq_count"] = model.freq_count;
    h["pulses"] = model.pulses;
    h["lambda"] = model.meta.lambda;
    h["objective_trace"] = model.meta.objective_trace;
    h["residual_fro"] = model.meta.residual_fro;
    h["converged"] = model.meta.converged;
    return finish(h, model.coeffs);
}

ScatteringModel deserialize_model(const std::string& bytes) {
    const ParsedHeader parsed = parse_header(bytes);
    const json& h = parsed.doc;
    if (h.value("kind", std::string()) != "model")
        throw ContainerError("container: expected kind 'model'");

    ScatteringModel model;
    const auto d = h.at("d").get<Eigen::Index>();
    model.spatial.n_range = h.at("n_range").get<int>();
    model.spatial.extent_m = h.at("extent_m").get<double>();
    if (model.spatial.n_range < 1) throw ContainerError("container: bad model grid");
    model.spatial.spacing_m = model.spatial.extent_m / model.spatial.n_range;
    model.basis.sigma_rad = h.at("sigma_g_rad").get<double>();
    model.basis.centers_rad = h.at("centers_rad").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(model.basis.centers_rad.size()) != d)
        throw ContainerError("container: basis size mismatch");
    model.elevation_rad = h.at("elevation_rad").get<double>();
    model.theta_center = h.at("theta_center_rad").get<double>();
    model.half_span = h.at("half_span_rad").get<double>();
    model.max_extrapolation = h.at("max_extrapolation_rad").get<double>();
    model.theta_look = h.at("theta_look_rad").get<double>();
    model.freq_start_hz = h.at("freq_start_hz").get<double>();
    model.freq_step_hz = h.at("freq_step_hz").get<double>();
    model.freq_count = h.at("freq_count").get<int>();
    model.pulses = h.at("pulses").get<int>();
    model.meta.lambda = h.at("lambda").get<double>();
    model.meta.objective_trace = h.at("objective_trace").get<std::vector<double>>();
    model.meta.residual_fro = h.at("residual_fro").get<double>();
    model.meta.converged = h.at("converged").get<bool>();
    model.coeffs = parse_payload(bytes, parsed.payload_offset, d, model.spatial.num_points());
    model.validate();
    return model;
}

std::string serialize_phase_history(const PhaseHistory& ph) {
    ph.validate();
    json h;
    h["version"] = kContainerVersion;
    h["kind"] = "phase_history";
    h["thetas_rad"] = ph.grid.thetas;
    h["freqs_hz"] = ph.grid.freqs;
    h["elevation_rad"] = ph.grid.elevation_rad;
    h["theta_look_rad"] = ph.grid.theta_look;
    return finish(h, ph.data);
}

PhaseHistory deserialize_phase_history(const std::string& bytes) {
    const ParsedHeader parsed = parse_header(bytes);
    const json& h = parsed.doc;
    if (h.value("kind", std::string()) != "phase_history")
        throw ContainerError("container: expected kind 'phase_history'");

    PhaseHistory ph;
    ph.grid.thetas = h.at("thetas_rad").get<std::vector<double>>();
    ph.grid.freqs = h.at("freqs_hz").get<std::vector<double>>();
    ph.grid.elevation_rad = h.at("elevation_rad").get<double>();
    ph.grid.theta_look = h.at("theta_look_rad").get<double>();
    ph.data = parse_payload(bytes, parsed.payload_offset,
                            static_cast<Eigen::Index>(ph.grid.thetas.size()),
                            static_cast<Eigen::Index>(ph.grid.freqs.size()));
    ph.validate();
    return ph;
}

std::string read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContainerError("container: cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_binary_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContainerError("container: cannot open " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace sar
