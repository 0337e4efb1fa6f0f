#pragma once

#include "sar/nudft.hpp"
#include "sar/phase_history.hpp"
#include "sar/types.hpp"

#include <vector>

namespace sar {

enum class WindowFamily { taylor, rect };
enum class TransformMode { exact, fast };
enum class RotationDirection { cw, ccw };

/// Aperture taper and oversampling of the image-formation chain.
struct WindowSpec {
    WindowFamily family = WindowFamily::taylor;
    int nbar = 4;
    double sidelobe_db = -35.0;   // must be negative
    double zero_pad_factor = 1.0; // >= 1
    void validate() const;
};

/// Classic Taylor taper: n symmetric weights, peak normalized to 1.
std::vector<double> taylor_window(int n, int nbar, double sll_db);

/// Weights of `spec` for an n-sample axis (all ones for rect).
std::vector<double> window_weights(const WindowSpec& spec, std::size_t n);

/// Reciprocal taper weights with the divisor clamped below at eps * max(w).
/// Returns the number of clamped entries.
int dewindow_weights(std::vector<double>& inverse, const std::vector<double>& w, double eps = 1e-6);

struct TransformOptions {
    TransformMode mode = TransformMode::fast;
    int jobs = 0;
    CglsOptions cgls; // exact-mode inversion controls
};

struct TransformStats {
    int clamped_weights = 0;
    CglsReport cgls;
};

/// Recovers de-windowed polar samples from a formed image. Exact mode
/// evaluates the non-uniform Fourier sum directly (exact trigonometric
/// interpolation of the pixel lattice spectrum); fast mode interpolates the
/// Cartesian FFT lattice bilinearly at the polar nodes.
PhaseHistory image_to_phase_history(const ComplexImage& img, const PolarGrid& grid,
                                    const WindowSpec& window, const TransformOptions& opts = {},
                                    TransformStats* stats = nullptr);

/// Forms an out_size x out_size image from windowed polar samples with pixel
/// spacing c/(2 B zero_pad_factor). Fast mode resamples onto the Cartesian
/// lattice and inverse-transforms; exact mode inverts the non-uniform sum by
/// least squares.
ComplexImage phase_history_to_image(const PhaseHistory& ph, int out_size,
                                    const WindowSpec& window, const TransformOptions& opts = {},
                                    TransformStats* stats = nullptr);

/// Fourier-domain translation by (dx, dy) meters; wraps circularly.
ComplexImage subpixel_shift(const ComplexImage& img, double dx_m, double dy_m);

/// Bilinear rotation about the image center; out-of-support pixels are zero.
/// ccw is the positive mathematical direction in (x, y) coordinates.
ComplexImage rotate_image(const ComplexImage& img, double angle_rad,
                          RotationDirection dir = RotationDirection::ccw);

/// Central h x w crop; offsets are floor((size - crop)/2).
ComplexImage crop_center(const ComplexImage& img, Eigen::Index h, Eigen::Index w);

} // namespace sar
