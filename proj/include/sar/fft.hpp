#pragma once

#include "sar/types.hpp"

namespace sar {

/// In-place 2-D DFT, e^{-j2*pi*...} sign, no normalization.
void fft2(CMatrix& m);

/// In-place 2-D inverse DFT including the 1/(rows*cols) factor.
void ifft2(CMatrix& m);

/// DFT between cell-centered samples and a centered frequency lattice.
///
/// Samples sit at positions u_i = (i - (n-1)/2) * spacing; lattice bins at
/// frequencies f_p = (p - floor(n/2)) / (n * spacing). centered_spectrum
/// evaluates G[p][q] = sum_{r,c} g[r][c] * exp(-j2*pi*(f_p y_r + f_q x_c));
/// centered_image inverts it exactly (up to FFT rounding).
CMatrix centered_spectrum(const CMatrix& image);
CMatrix centered_image(const CMatrix& spectrum);

/// Frequency of centered-lattice bin p for an n-point axis with unit spacing
/// (multiply by 1/(n*spacing) for physical units).
inline double centered_bin(Eigen::Index p, Eigen::Index n) {
    return static_cast<double>(p) - static_cast<double>(n / 2);
}

} // namespace sar
