#include "sar/quicklook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sar {

std::string render_pgm(const ComplexImage& img, double dynamic_range_db) {
    if (!(dynamic_range_db > 0.0))
        throw std::invalid_argument("render_pgm: dynamic range must be > 0 dB");
    const Eigen::Index nr = img.rows(), nc = img.cols();
    double peak = 0.0;
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c) peak = std::max(peak, std::abs(img.data(r, c)));

    std::ostringstream out;
    out << "P5\n" << nc << " " << nr << "\n255\n";
    for (Eigen::Index r = 0; r < nr; ++r) {
        for (Eigen::Index c = 0; c < nc; ++c) {
            unsigned char gray = 0;
            const double mag = std::abs(img.data(r, c));
            if (peak > 0.0 && mag > 0.0) {
                const double db = 20.0 * std::log10(mag / peak);
                const double clipped = std::clamp(db, -dynamic_range_db, 0.0);
                gray = static_cast<unsigned char>(
                    std::lround(255.0 * (clipped + dynamic_range_db) / dynamic_range_db));
            }
            out.put(static_cast<char>(gray));
        }
    }
    return out.str();
}

void write_quicklook(const ComplexImage& img, const std::string& path, double dynamic_range_db) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_quicklook: cannot open " + path);
    const std::string bytes = render_pgm(img, dynamic_range_db);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace sar
