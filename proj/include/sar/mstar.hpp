#pragma once

#include "sar/dataset.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sar {

struct MstarParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed chip plus its header keys verbatim (unknown keys preserved).
struct MstarChip {
    DatasetRecord record;
    std::vector<std::pair<std::string, std::string>> header;

    const std::string* find(const std::string& key) const;
};

/// Phoenix-format chip reader: ASCII key=value header between the
/// [PhoenixHeaderVer ...] / [EndofPhoenixHeader] sentinels, then big-endian
/// float32 magnitude and phase blocks. Requires NumberOfRows, NumberOfColumns
/// and TargetAz.
MstarChip read_mstar(const std::string& bytes);
MstarChip read_mstar_file(const std::string& path);

/// Fixture writer emitting the same layout read_mstar parses.
std::string write_mstar(const MstarChip& chip);
void write_mstar_file(const MstarChip& chip, const std::string& path);

/// Builds a chip (header + record) from a record, deriving standard keys.
MstarChip make_mstar_chip(const DatasetRecord& record);

} // namespace sar
