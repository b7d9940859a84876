#include "zones/sphere.hpp"

#include <algorithm>

namespace zones {

double normalize_ra(double ra) {
    double r = std::fmod(ra, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;  // fmod can round up to 360 for tiny negatives
    return r;
}

UnitVector to_unit_vector(const SphericalCoord& c) {
    const double ra = to_radians(c.ra);
    const double dec = to_radians(c.dec);
    const double cd = std::cos(dec);
    return {cd * std::cos(ra), cd * std::sin(ra), std::sin(dec)};
}

double chord_squared(const UnitVector& a, const UnitVector& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::clamp(dx * dx + dy * dy + dz * dz, 0.0, 4.0);
}

double chord2_threshold(double theta_deg) {
    const double s = std::sin(to_radians(theta_deg) / 2.0);
    return 4.0 * s * s;
}

double angular_distance_deg(const UnitVector& a, const UnitVector& b) {
    const double half_chord = std::sqrt(chord_squared(a, b)) / 2.0;
    return to_degrees(2.0 * std::asin(std::min(half_chord, 1.0)));
}

bool within_radius(const UnitVector& a, const UnitVector& b, double theta_deg) {
    return chord_squared(a, b) < chord2_threshold(theta_deg);
}

double alpha(double theta_deg, double dec_deg) {
    const double abs_dec = std::fabs(dec_deg);
    if (abs_dec + theta_deg >= 90.0) return 180.0;
    const double t = to_radians(theta_deg);
    const double d = to_radians(abs_dec);
    // cos(d-t)*cos(d+t) > 0 holds below the pole threshold; the clamp only
    // absorbs rounding at the boundary.
    const double radicand = std::max(std::cos(d - t) * std::cos(d + t), 0.0);
    return to_degrees(std::fabs(std::atan(std::sin(t) / std::sqrt(radicand))));
}

}  // namespace zones
