#pragma once

#include "sar/types.hpp"

#include <string>

namespace sar {

/// 8-bit binary PGM of the magnitude image on a dB scale clipped to
/// [peak - dynamic_range, peak].
std::string render_pgm(const ComplexImage& img, double dynamic_range_db = 40.0);
void write_quicklook(const ComplexImage& img, const std::string& path,
                     double dynamic_range_db = 40.0);

} // namespace sar
