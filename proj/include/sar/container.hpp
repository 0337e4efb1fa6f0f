#pragma once

#include "sar/dataset.hpp"
#include "sar/phase_history.hpp"
#include "sar/scattering.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace sar {

struct ContainerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// SARC1 container: magic "SARC1\n", one JSON header line, then raw
/// little-endian float32 interleaved real/imag payload, row-major.
inline constexpr char kContainerMagic[] = "SARC1\n";
inline constexpr int kContainerVersion = 1;

/// Synthesis provenance carried by augmented records.
struct SynthesisMeta {
    double source_azimuth_rad = 0.0;
    double shift_dx_m = 0.0, shift_dy_m = 0.0;
    double sigma_g_rad = 0.0;
    double lambda = 0.0;
    double delta_theta_rad = 0.0;
};

struct RecordContainer {
    DatasetRecord record;
    std::optional<SynthesisMeta> synthesis;
};

std::string container_kind(const std::string& bytes); // "record" | "model" | "phase_history"

std::string serialize_record(const RecordContainer& rc);
RecordContainer deserialize_record(const std::string& bytes);

std::string serialize_model(const ScatteringModel& model);
ScatteringModel deserialize_model(const std::string& bytes);

std::string serialize_phase_history(const PhaseHistory& ph);
PhaseHistory deserialize_phase_history(const std::string& bytes);

std::string read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::string& bytes);

} // namespace sar
