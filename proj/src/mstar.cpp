#include "sar/mstar.hpp"

#include "sar/geometry.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sar {

namespace {

constexpr const char* kHeaderBegin = "[PhoenixHeaderVer";
constexpr const char* kHeaderEnd = "[EndofPhoenixHeader]";

float read_be_float(const unsigned char* p) {
    std::uint32_t bits = (static_cast<std::uint32_t>(p[0]) << 24) |
                         (static_cast<std::uint32_t>(p[1]) << 16) |
                         (static_cast<std::uint32_t>(p[2]) << 8) |
                         static_cast<std::uint32_t>(p[3]);
    return std::bit_cast<float>(bits);
}

void write_be_float(std::string& out, float value) {
    const auto bits = std::bit_cast<std::uint32_t>(value);
    out.push_back(static_cast<char>((bits >> 24) & 0xff));
    out.push_back(static_cast<char>((bits >> 16) & 0xff));
    out.push_back(static_cast<char>((bits >> 8) & 0xff));
    out.push_back(static_cast<char>(bits & 0xff));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

const std::string* MstarChip::find(const std::string& key) const {
    for (const auto& [k, v] : header) {
        if (k == key) return &v;
    }
    return nullptr;
}

MstarChip read_mstar(const std::string& bytes) {
    const auto begin_pos = bytes.find(kHeaderBegin);
    if (begin_pos == std::string::npos)
        throw MstarParseError("mstar: missing [PhoenixHeaderVer ...] sentinel");
    const auto end_pos = bytes.find(kHeaderEnd, begin_pos);
    if (end_pos == std::string::npos)
        throw MstarParseError("mstar: missing [EndofPhoenixHeader] sentinel");

    MstarChip chip;
    std::istringstream header_text(bytes.substr(begin_pos, end_pos - begin_pos));
    std::string line;
    std::getline(header_text, line); // the version sentinel itself
    while (std::getline(header_text, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw MstarParseError("mstar: malformed header line '" + line + "'");
        chip.header.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    auto required = [&](const char* key) -> const std::string& {
        const std::string* v = chip.find(key);
        if (!v) throw MstarParseError(std::string("mstar: missing header key ") + key);
        return *v;
    };
    auto to_double = [](const std::string& v, const char* key) {
        try {
            return std::stod(v);
        } catch (const std::exception&) {
            throw MstarParseError(std::string("mstar: non-numeric value for ") + key);
        }
    };

    const auto rows = static_cast<Eigen::Index>(to_double(required("NumberOfRows"), "NumberOfRows"));
    const auto cols =
        static_cast<Eigen::Index>(to_double(required("NumberOfColumns"), "NumberOfColumns"));
    if (rows < 1 || cols < 1) throw MstarParseError("mstar: non-positive image dimensions");
    const double azimuth_deg = to_double(required("TargetAz"), "TargetAz");

    auto data_pos = bytes.find('\n', end_pos);
    if (data_pos == std::string::npos) throw MstarParseError("mstar: truncated after header");
    ++data_pos;
    const std::size_t pixel_count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    const std::size_t need = 2 * 4 * pixel_count;
    if (bytes.size() - data_pos < need)
        throw MstarParseError("mstar: truncated data block (magnitude+phase)");

    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + data_pos);
    DatasetRecord& record = chip.record;
    record.image.data.resize(rows, cols);
    for (std::size_t i = 0; i < pixel_count; ++i) {
        const double mag = read_be_float(raw + 4 * i);
        const double phase = read_be_float(raw + 4 * (pixel_count + i));
        record.image.data(static_cast<Eigen::Index>(i / static_cast<std::size_t>(cols)),
                          static_cast<Eigen::Index>(i % static_cast<std::size_t>(cols))) =
            std::polar(mag, phase);
    }

    record.azimuth_rad = normalize_azimuth(deg2rad(azimuth_deg));
    if (const std::string* v = chip.find("TargetType")) record.class_id = class_id_from_name(*v);
    if (const std::string* v = chip.find("DesiredDepression"))
        record.depression_rad = deg2rad(to_double(*v, "DesiredDepression"));
    if (const std::string* v = chip.find("CenterFrequency"))
        record.center_frequency_hz = to_double(*v, "CenterFrequency");
    if (const std::string* v = chip.find("Bandwidth"))
        record.bandwidth_hz = to_double(*v, "Bandwidth");
    if (const std::string* v = chip.find("PixelSpacing"))
        record.image.pixel_spacing_m = to_double(*v, "PixelSpacing");
    if (const std::string* v = chip.find("Filename")) record.source_id = *v;
    record.provenance = Provenance::original;
    return chip;
}

MstarChip read_mstar_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MstarParseError("mstar: cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_mstar(bytes);
}

std::string write_mstar(const MstarChip& chip) {
    const auto rows = chip.record.image.rows();
    const auto cols = chip.record.image.cols();
    std::ostringstream header;
    header << "[PhoenixHeaderVer 0.1]\n";
    for (const auto& [k, v] : chip.header) header << k << "= " << v << "\n";
    header << kHeaderEnd << "\n";

    std::string out = header.str();
    out.reserve(out.size() + 8 * static_cast<std::size_t>(rows * cols));
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            write_be_float(out, static_cast<float>(std::abs(chip.record.image.data(r, c))));
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            write_be_float(out, static_cast<float>(std::arg(chip.record.image.data(r, c))));
    return out;
}

void write_mstar_file(const MstarChip& chip, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MstarParseError("mstar: cannot open " + path);
    const std::string bytes = write_mstar(chip);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

MstarChip make_mstar_chip(const DatasetRecord& record) {
    MstarChip chip;
    chip.record = record;
    std::ostringstream az;
    az.precision(17);
    auto set = [&chip](const std::string& k, const std::string& v) {
        chip.header.emplace_back(k, v);
    };
    auto number = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    set("NumberOfRows", std::to_string(record.image.rows()));
    set("NumberOfColumns", std::to_string(record.image.cols()));
    set("TargetAz", number(rad2deg(record.azimuth_rad)));
    if (record.class_id >= 0 && record.class_id < kNumClasses)
        set("TargetType", class_names()[static_cast<std::size_t>(record.class_id)]);
    set("DesiredDepression", number(rad2deg(record.depression_rad)));
    if (record.center_frequency_hz > 0.0) set("CenterFrequency", number(record.center_frequency_hz));
    if (record.bandwidth_hz > 0.0) set("Bandwidth", number(record.bandwidth_hz));
    set("PixelSpacing", number(record.image.pixel_spacing_m));
    if (!record.source_id.empty()) set("Filename", record.source_id);
    return chip;
}

} // namespace sar
