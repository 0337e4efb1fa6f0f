#include "sar/baseline.hpp"

#include "sar/geometry.hpp"
#include "sar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sar {

namespace {

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

// Shift `theta` into the branch centered on `anchor` so plain absolute
// differences behave like circular ones.
double unwrap_near(double theta, double anchor) {
    double d = std::fmod(theta - anchor, 2.0 * kPi);
    if (d > kPi) d -= 2.0 * kPi;
    if (d <= -kPi) d += 2.0 * kPi;
    return anchor + d;
}

ComplexImage maybe_magnitude(const ComplexImage& img, bool magnitude_only) {
    if (!magnitude_only) return img;
    ComplexImage out;
    out.pixel_spacing_m = img.pixel_spacing_m;
    out.data = img.data.cwiseAbs().cast<cdouble>();
    return out;
}

// Rotation by theta and theta - 2pi coincide; keep the argument in (-pi, pi].
double wrap_pi(double theta) { return unwrap_near(theta, 0.0); }

} // namespace

std::pair<double, double> nearest_poses(const std::vector<double>& azimuths_rad, double theta_c) {
    std::set<double> unique(azimuths_rad.begin(), azimuths_rad.end());
    if (unique.size() < 2)
        throw std::invalid_argument("nearest_poses: need at least 2 distinct poses");

    std::vector<double> poses(unique.begin(), unique.end());
    std::sort(poses.begin(), poses.end(), [theta_c](double a, double b) {
        const double da = circular_distance(a, theta_c);
        const double db = circular_distance(b, theta_c);
        if (da != db) return da < db;
        return a < b;
    });
    return {poses[0], poses[1]};
}

std::pair<double, double> interp_weights(double theta_a, double theta_b, double theta_c) {
    const double b = unwrap_near(theta_b, theta_a);
    const double c = unwrap_near(theta_c, theta_a);
    const double da = std::abs(theta_a - c);
    const double db = std::abs(b - c);
    if (da + db == 0.0) throw std::invalid_argument("interp_weights: theta_a == theta_b == theta_c");
    const double wa = db / (da + db);
    return {wa, 1.0 - wa};
}

ComplexImage rotate_pose(const ComplexImage& image, double theta_src, double theta_c,
                         bool magnitude_only) {
    const double angle = unwrap_near(theta_c, theta_src) - theta_src;
    return rotate_image(maybe_magnitude(image, magnitude_only), angle, RotationDirection::cw);
}

ComplexImage linear_interp_pose(const PoseNeighborhood& nbr, double theta_c,
                                bool magnitude_only) {
    if (nbr.theta_a == nbr.theta_b)
        throw std::invalid_argument("linear_interp_pose: neighbor poses must differ");
    if (nbr.image_a.rows() != nbr.image_b.rows() || nbr.image_a.cols() != nbr.image_b.cols())
        throw std::invalid_argument("linear_interp_pose: neighbor image sizes differ");

    const auto [wa, wb] = interp_weights(nbr.theta_a, nbr.theta_b, theta_c);
    const ComplexImage ra = rotate_image(maybe_magnitude(nbr.image_a, magnitude_only),
                                         wrap_pi(nbr.theta_a), RotationDirection::cw);
    const ComplexImage rb = rotate_image(maybe_magnitude(nbr.image_b, magnitude_only),
                                         wrap_pi(nbr.theta_b), RotationDirection::cw);

    ComplexImage blend;
    blend.pixel_spacing_m = nbr.image_a.pixel_spacing_m;
    blend.data = wa * ra.data + wb * rb.data;
    return rotate_image(blend, wrap_pi(theta_c), RotationDirection::ccw);
}

} // namespace sar
