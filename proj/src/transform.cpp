#include "sar/transform.hpp"

#include "sar/fft.hpp"
#include "sar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sar {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double band_width(const PolarGrid& grid) {
    return grid.freqs.back() - grid.freqs.front();
}

// Radial spatial frequency (cycles/m) of the band center.
double carrier(const PolarGrid& grid) {
    const double f_center = 0.5 * (grid.freqs.front() + grid.freqs.back());
    return 2.0 * f_center * std::cos(grid.elevation_rad) / kSpeedOfLight;
}

struct Bilinear {
    Eigen::Index i0, i1;
    double w0, w1;
};

// Fractional index -> neighbor pair, clamped so band-edge samples stay valid.
Bilinear bilinear_axis(double pos, Eigen::Index n) {
    Bilinear b{};
    if (pos <= 0.0) {
        b.i0 = b.i1 = 0;
        b.w0 = 1.0;
        b.w1 = 0.0;
        return b;
    }
    if (pos >= static_cast<double>(n - 1)) {
        b.i0 = b.i1 = n - 1;
        b.w0 = 1.0;
        b.w1 = 0.0;
        return b;
    }
    b.i0 = static_cast<Eigen::Index>(pos);
    b.i1 = b.i0 + 1;
    b.w1 = pos - static_cast<double>(b.i0);
    b.w0 = 1.0 - b.w1;
    return b;
}

CVector flatten(const CMatrix& m) {
    CVector v(m.size());
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v(idx++) = m(r, c);
    return v;
}

CMatrix reshape(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v(idx++);
    return m;
}

// Carrier demodulation along x; sign > 0 remodulates.
void apply_carrier_ramp(CMatrix& data, const ComplexImage& geom, double rho_c, int sign) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        const cdouble ramp = std::polar(1.0, sign * 2.0 * kPi * rho_c * geom.coord_x(c));
        for (Eigen::Index r = 0; r < data.rows(); ++r) data(r, c) *= ramp;
    }
}

} // namespace

void WindowSpec::validate() const {
    require(nbar >= 1, "WindowSpec: nbar must be >= 1");
    require(std::isfinite(sidelobe_db) && sidelobe_db < 0.0, "WindowSpec: sidelobe level must be < 0 dB");
    require(std::isfinite(zero_pad_factor) && zero_pad_factor >= 1.0,
            "WindowSpec: zero_pad_factor must be >= 1");
}

std::vector<double> taylor_window(int n, int nbar, double sll_db) {
    require(n >= 1, "taylor_window: n must be >= 1");
    require(nbar >= 1, "taylor_window: nbar must be >= 1");
    require(std::isfinite(sll_db) && sll_db < 0.0, "taylor_window: sidelobe level must be < 0 dB");

    const double amplitude_ratio = std::pow(10.0, -sll_db / 20.0);
    const double a = std::acosh(amplitude_ratio) / kPi;
    const double sigma2 = static_cast<double>(nbar) * static_cast<double>(nbar) /
                          (a * a + (nbar - 0.5) * (nbar - 0.5));

    std::vector<double> fm(static_cast<std::size_t>(nbar) - 1, 0.0);
    for (int m = 1; m < nbar; ++m) {
        double numer = (m % 2 == 1) ? 1.0 : -1.0;
        for (int j = 1; j < nbar; ++j)
            numer *= 1.0 - static_cast<double>(m) * m / (sigma2 * (a * a + (j - 0.5) * (j - 0.5)));
        double denom = 2.0;
        for (int j = 1; j < nbar; ++j) {
            if (j == m) continue;
            denom *= 1.0 - static_cast<double>(m) * m / (static_cast<double>(j) * j);
        }
        fm[static_cast<std::size_t>(m) - 1] = numer / denom;
    }

    std::vector<double> w(static_cast<std::size_t>(n));
    const double center = 0.5 * static_cast<double>(n - 1);
    double peak = 0.0;
    for (int k = 0; k < n; ++k) {
        double value = 1.0;
        for (int m = 1; m < nbar; ++m)
            value += 2.0 * fm[static_cast<std::size_t>(m) - 1] *
                     std::cos(2.0 * kPi * m * (static_cast<double>(k) - center) / static_cast<double>(n));
        w[static_cast<std::size_t>(k)] = value;
        peak = std::max(peak, value);
    }
    for (auto& x : w) x /= peak;
    // enforce exact symmetry against rounding drift in the cosine arguments
    for (int k = 0; k < n / 2; ++k) {
        const double s = 0.5 * (w[static_cast<std::size_t>(k)] + w[static_cast<std::size_t>(n - 1 - k)]);
        w[static_cast<std::size_t>(k)] = s;
        w[static_cast<std::size_t>(n - 1 - k)] = s;
    }
    return w;
}

std::vector<double> window_weights(const WindowSpec& spec, std::size_t n) {
    spec.validate();
    if (spec.family == WindowFamily::rect) return std::vector<double>(n, 1.0);
    return taylor_window(static_cast<int>(n), spec.nbar, spec.sidelobe_db);
}

int dewindow_weights(std::vector<double>& inverse, const std::vector<double>& w, double eps) {
    const double peak = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
    const double floor_value = eps * peak;
    int clamped = 0;
    inverse.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double d = w[i];
        if (d < floor_value) {
            d = floor_value;
            ++clamped;
        }
        inverse[i] = 1.0 / d;
    }
    return clamped;
}

PhaseHistory image_to_phase_history(const ComplexImage& img, const PolarGrid& grid,
                                    const WindowSpec& window, const TransformOptions& opts,
                                    TransformStats* stats) {
    grid.validate();
    window.validate();
    require(img.rows() >= 1 && img.cols() >= 1, "image_to_phase_history: empty image");
    require(img.pixel_spacing_m > 0.0, "image_to_phase_history: pixel spacing must be > 0");
    require(img.data.allFinite(), "image_to_phase_history: non-finite image");

    const auto n_theta = static_cast<Eigen::Index>(grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(grid.num_freqs());
    const double cos_elev = std::cos(grid.elevation_rad);
    const double rho_c = carrier(grid);
    const double delta = img.pixel_spacing_m;

    CMatrix samples;
    if (opts.mode == TransformMode::exact) {
        // the direct sum interpolates the periodic pixel spectrum; any node is valid
        samples = nudft_forward(flatten(img.data), scene_points(img), grid, opts.jobs);
    } else {
        // Polar nodes must lie inside the band the pixel lattice supports.
        // The annulus corners of an unpadded chip overhang by O(1 - cos) of
        // the aperture; 5% slack admits them and the lattice edge clamps.
        const double nyq = 0.5 / delta * 1.05;
        for (double f : {grid.freqs.front(), grid.freqs.back()}) {
            for (double th : {grid.thetas.front(), grid.thetas.back(), grid.theta_look}) {
                if (th < grid.thetas.front() || th > grid.thetas.back()) continue;
                const double rho = 2.0 * f * cos_elev / kSpeedOfLight;
                const double up = rho * std::cos(th - grid.theta_look) - rho_c;
                const double v = rho * std::sin(th - grid.theta_look);
                require(std::abs(up) <= nyq && std::abs(v) <= nyq,
                        "image_to_phase_history: polar node outside image spectral support");
            }
        }
        CMatrix work = img.data;
        apply_carrier_ramp(work, img, rho_c, -1);
        const CMatrix spectrum = centered_spectrum(work);
        const auto nr = img.rows(), nc = img.cols();
        samples.resize(n_theta, n_freq);
        for (Eigen::Index i = 0; i < n_theta; ++i) {
            const double theta = grid.thetas[static_cast<std::size_t>(i)] - grid.theta_look;
            const double ct = std::cos(theta), st = std::sin(theta);
            for (Eigen::Index m = 0; m < n_freq; ++m) {
                const double rho =
                    2.0 * grid.freqs[static_cast<std::size_t>(m)] * cos_elev / kSpeedOfLight;
                const double up = rho * ct - rho_c;
                const double v = rho * st;
                const Bilinear bc = bilinear_axis(up * delta * static_cast<double>(nc) +
                                                      static_cast<double>(nc / 2), nc);
                const Bilinear br = bilinear_axis(v * delta * static_cast<double>(nr) +
                                                      static_cast<double>(nr / 2), nr);
                samples(i, m) = br.w0 * (bc.w0 * spectrum(br.i0, bc.i0) + bc.w1 * spectrum(br.i0, bc.i1)) +
                                br.w1 * (bc.w0 * spectrum(br.i1, bc.i0) + bc.w1 * spectrum(br.i1, bc.i1));
            }
        }
    }

    std::vector<double> inv_theta, inv_freq;
    int clamped = dewindow_weights(inv_theta, window_weights(window, grid.num_pulses()));
    clamped += dewindow_weights(inv_freq, window_weights(window, grid.num_freqs()));
    for (Eigen::Index i = 0; i < n_theta; ++i)
        for (Eigen::Index m = 0; m < n_freq; ++m)
            samples(i, m) *= inv_theta[static_cast<std::size_t>(i)] * inv_freq[static_cast<std::size_t>(m)];
    if (stats) stats->clamped_weights = clamped;

    return PhaseHistory(std::move(samples), grid);
}

ComplexImage phase_history_to_image(const PhaseHistory& ph, int out_size,
                                    const WindowSpec& window, const TransformOptions& opts,
                                    TransformStats* stats) {
    ph.validate();
    window.validate();
    const auto n_theta = static_cast<Eigen::Index>(ph.grid.num_pulses());
    const auto n_freq = static_cast<Eigen::Index>(ph.grid.num_freqs());
    require(out_size >= static_cast<int>(std::max(n_theta, n_freq)),
            "phase_history_to_image: out_size smaller than data");

    const double span = band_width(ph.grid);
    require(span > 0.0, "phase_history_to_image: degenerate frequency band");
    const double delta = kSpeedOfLight / (2.0 * span * window.zero_pad_factor);
    const double cos_elev = std::cos(ph.grid.elevation_rad);
    const double rho_c = carrier(ph.grid);

    // taper the polar data
    const std::vector<double> w_theta = window_weights(window, ph.grid.num_pulses());
    const std::vector<double> w_freq = window_weights(window, ph.grid.num_freqs());
    CMatrix tapered = ph.data;
    for (Eigen::Index i = 0; i < n_theta; ++i)
        for (Eigen::Index m = 0; m < n_freq; ++m)
            tapered(i, m) *= w_theta[static_cast<std::size_t>(i)] * w_freq[static_cast<std::size_t>(m)];

    ComplexImage out;
    out.pixel_spacing_m = delta;

    if (opts.mode == TransformMode::exact) {
        out.data = CMatrix::Zero(out_size, out_size);
        out.data.setZero();
        ComplexImage geom;
        geom.data = out.data;
        geom.pixel_spacing_m = delta;
        CglsReport report;
        const CVector scene =
            nudft_invert(tapered, scene_points(geom), ph.grid, opts.cgls, &report);
        out.data = reshape(scene, out_size, out_size);
        if (stats) stats->cgls = report;
        return out;
    }

    const double theta0 = ph.grid.thetas.front();
    const double dtheta = ph.grid.theta_spacing();
    const double f0 = ph.grid.freqs.front();
    const double df = ph.grid.freq_spacing();
    const Eigen::Index n = out_size;
    CMatrix lattice = CMatrix::Zero(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        const double v = centered_bin(p, n) / (static_cast<double>(n) * delta);
        for (Eigen::Index q = 0; q < n; ++q) {
            const double u = centered_bin(q, n) / (static_cast<double>(n) * delta) + rho_c;
            const double rho = std::hypot(u, v);
            const double theta = std::atan2(v, u) + ph.grid.theta_look;
            const double f = rho * kSpeedOfLight / (2.0 * cos_elev);
            const double fi = (n_theta == 1) ? 0.0 : (theta - theta0) / dtheta;
            const double fme = (n_freq == 1) ? 0.0 : (f - f0) / df;
            const double eps_i = 1e-9 * static_cast<double>(n_theta);
            const double eps_m = 1e-9 * static_cast<double>(n_freq);
            if (fi < -eps_i || fi > static_cast<double>(n_theta - 1) + eps_i) continue;
            if (fme < -eps_m || fme > static_cast<double>(n_freq - 1) + eps_m) continue;
            const Bilinear bi = bilinear_axis(fi, n_theta);
            const Bilinear bm = bilinear_axis(fme, n_freq);
            lattice(p, q) = bi.w0 * (bm.w0 * tapered(bi.i0, bm.i0) + bm.w1 * tapered(bi.i0, bm.i1)) +
                            bi.w1 * (bm.w0 * tapered(bi.i1, bm.i0) + bm.w1 * tapered(bi.i1, bm.i1));
        }
    }
    out.data = centered_image(lattice);
    apply_carrier_ramp(out.data, out, rho_c, +1);
    return out;
}

ComplexImage subpixel_shift(const ComplexImage& img, double dx_m, double dy_m) {
    require(img.data.allFinite(), "subpixel_shift: non-finite image");
    require(img.pixel_spacing_m > 0.0, "subpixel_shift: pixel spacing must be > 0");
    const Eigen::Index nr = img.rows(), nc = img.cols();
    CMatrix spectrum = centered_spectrum(img.data);
    for (Eigen::Index p = 0; p < nr; ++p) {
        const double v = centered_bin(p, nr) / (static_cast<double>(nr) * img.pixel_spacing_m);
        for (Eigen::Index q = 0; q < nc; ++q) {
            const double u = centered_bin(q, nc) / (static_cast<double>(nc) * img.pixel_spacing_m);
            spectrum(p, q) *= std::polar(1.0, -2.0 * kPi * (u * dx_m + v * dy_m));
        }
    }
    ComplexImage out;
    out.pixel_spacing_m = img.pixel_spacing_m;
    out.data = centered_image(spectrum);
    return out;
}

ComplexImage rotate_image(const ComplexImage& img, double angle_rad, RotationDirection dir) {
    require(std::isfinite(angle_rad) && std::abs(angle_rad) <= kPi + 1e-12,
            "rotate_image: |angle| must be <= pi");
    const double phi = (dir == RotationDirection::ccw) ? angle_rad : -angle_rad;
    const double c = std::cos(phi), s = std::sin(phi);
    const Eigen::Index nr = img.rows(), nc = img.cols();
    const double cy = 0.5 * static_cast<double>(nr - 1);
    const double cx = 0.5 * static_cast<double>(nc - 1);

    ComplexImage out;
    out.pixel_spacing_m = img.pixel_spacing_m;
    out.data = CMatrix::Zero(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) {
        for (Eigen::Index col = 0; col < nc; ++col) {
            // inverse-rotate the output pixel into the source frame
            const double x = static_cast<double>(col) - cx;
            const double y = static_cast<double>(r) - cy;
            const double sx = c * x + s * y + cx;
            const double sy = -s * x + c * y + cy;
            if (sx < 0.0 || sx > static_cast<double>(nc - 1) || sy < 0.0 ||
                sy > static_cast<double>(nr - 1))
                continue;
            const Bilinear bx = bilinear_axis(sx, nc);
            const Bilinear by = bilinear_axis(sy, nr);
            out.data(r, col) =
                by.w0 * (bx.w0 * img.data(by.i0, bx.i0) + bx.w1 * img.data(by.i0, bx.i1)) +
                by.w1 * (bx.w0 * img.data(by.i1, bx.i0) + bx.w1 * img.data(by.i1, bx.i1));
        }
    }
    return out;
}

ComplexImage crop_center(const ComplexImage& img, Eigen::Index h, Eigen::Index w) {
    require(h >= 1 && w >= 1, "crop_center: crop size must be >= 1");
    require(h <= img.rows() && w <= img.cols(), "crop_center: crop larger than image");
    const Eigen::Index r0 = (img.rows() - h) / 2;
    const Eigen::Index c0 = (img.cols() - w) / 2;
    ComplexImage out;
    out.pixel_spacing_m = img.pixel_spacing_m;
    out.data = img.data.block(r0, c0, h, w);
    return out;
}

} // namespace sar
