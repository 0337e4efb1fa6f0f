#pragma once

#include <complex>
#include <Eigen/Dense>

namespace sar {

using cdouble = std::complex<double>;

// Row-major so that serialization and FFT interop need no transposes.
using CMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<cdouble, Eigen::Dynamic, 1>;
using RVector = Eigen::Matrix<double, Eigen::Dynamic, 1>;

/// Complex scene chip. Rows index y (range), columns index x (cross-range);
/// pixel (r, c) sits at (x, y) = ((c - (cols-1)/2) * spacing, (r - (rows-1)/2) * spacing).
struct ComplexImage {
    CMatrix data;
    double pixel_spacing_m = 1.0;

    ComplexImage() = default;
    ComplexImage(CMatrix d, double spacing) : data(std::move(d)), pixel_spacing_m(spacing) {}

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index cols() const { return data.cols(); }
    double norm() const { return data.norm(); }

    double coord_x(Eigen::Index c) const {
        return (static_cast<double>(c) - 0.5 * static_cast<double>(cols() - 1)) * pixel_spacing_m;
    }
    double coord_y(Eigen::Index r) const {
        return (static_cast<double>(r) - 0.5 * static_cast<double>(rows() - 1)) * pixel_spacing_m;
    }
};

} // namespace sar
