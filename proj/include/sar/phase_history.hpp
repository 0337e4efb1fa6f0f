#pragma once

#include "sar/geometry.hpp"
#include "sar/types.hpp"

namespace sar {

/// De-chirped measurements on a polar grid. Rows index azimuth pulses,
/// columns index frequency samples.
struct PhaseHistory {
    CMatrix data;
    PolarGrid grid;

    PhaseHistory() = default;
    PhaseHistory(CMatrix d, PolarGrid g) : data(std::move(d)), grid(std::move(g)) {}

    double norm() const { return data.norm(); }
    void validate() const {
        grid.validate();
        if (static_cast<std::size_t>(data.rows()) != grid.num_pulses() ||
            static_cast<std::size_t>(data.cols()) != grid.num_freqs())
            throw std::invalid_argument("PhaseHistory: data dimensions do not match grid");
        if (!data.allFinite()) throw std::invalid_argument("PhaseHistory: non-finite samples");
    }
};

} // namespace sar
