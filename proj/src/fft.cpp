#include "sar/fft.hpp"
#include "sar/geometry.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace sar {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run_fftw(CMatrix& m, int sign) {
    if (m.size() == 0) return;
    auto* ptr = reinterpret_cast<fftw_complex*>(m.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                                ptr, ptr, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

struct AxisPhases {
    // pre[i]: applied to samples before the FFT; post[p]: applied to bins after.
    std::vector<cdouble> pre, post;
};

// exp(-j2pi(p-b)(i-a)/n) = exp(-j2pi p i/n) * pre(i) * post(p), with
// a = (n-1)/2 the sample center and b = floor(n/2) the bin center.
AxisPhases centered_axis_phases(Eigen::Index n) {
    const double a = 0.5 * static_cast<double>(n - 1);
    const double b = static_cast<double>(n / 2);
    const double w = 2.0 * kPi / static_cast<double>(n);
    AxisPhases ph;
    ph.pre.resize(static_cast<std::size_t>(n));
    ph.post.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        ph.pre[static_cast<std::size_t>(i)] = std::polar(1.0, w * (b * t - 0.5 * a * b));
        ph.post[static_cast<std::size_t>(i)] = std::polar(1.0, w * (a * t - 0.5 * a * b));
    }
    return ph;
}

} // namespace

void fft2(CMatrix& m) { run_fftw(m, FFTW_FORWARD); }

void ifft2(CMatrix& m) {
    run_fftw(m, FFTW_BACKWARD);
    m *= cdouble(1.0 / static_cast<double>(m.rows() * m.cols()), 0.0);
}

CMatrix centered_spectrum(const CMatrix& image) {
    const Eigen::Index nr = image.rows(), nc = image.cols();
    const AxisPhases row = centered_axis_phases(nr);
    const AxisPhases col = centered_axis_phases(nc);
    CMatrix work = image;
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c)
            work(r, c) *= row.pre[static_cast<std::size_t>(r)] * col.pre[static_cast<std::size_t>(c)];
    fft2(work);
    for (Eigen::Index p = 0; p < nr; ++p)
        for (Eigen::Index q = 0; q < nc; ++q)
            work(p, q) *= row.post[static_cast<std::size_t>(p)] * col.post[static_cast<std::size_t>(q)];
    return work;
}

CMatrix centered_image(const CMatrix& spectrum) {
    const Eigen::Index nr = spectrum.rows(), nc = spectrum.cols();
    const AxisPhases row = centered_axis_phases(nr);
    const AxisPhases col = centered_axis_phases(nc);
    CMatrix work = spectrum;
    for (Eigen::Index p = 0; p < nr; ++p)
        for (Eigen::Index q = 0; q < nc; ++q)
            work(p, q) *= std::conj(row.post[static_cast<std::size_t>(p)] * col.post[static_cast<std::size_t>(q)]);
    ifft2(work);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < nc; ++c)
            work(r, c) *= std::conj(row.pre[static_cast<std::size_t>(r)] * col.pre[static_cast<std::size_t>(c)]);
    return work;
}

} // namespace sar
