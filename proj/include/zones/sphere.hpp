#pragma once

#include <cmath>

namespace zones {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline double to_radians(double degrees) { return degrees * (kPi / 180.0); }
inline double to_degrees(double radians) { return radians * (180.0 / kPi); }

// Right ascension / declination in degrees. ra lives in [0, 360), dec in [-90, 90].
// Terrestrial readers: ra ~ lon, dec ~ lat.
struct SphericalCoord {
    double ra = 0.0;
    double dec = 0.0;
};

struct UnitVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const UnitVector&) const = default;
};

// Wraps any real longitude into [0, 360).
double normalize_ra(double ra);

UnitVector to_unit_vector(const SphericalCoord& c);

// Squared chord length between two unit vectors, clamped to [0, 4].
double chord_squared(const UnitVector& a, const UnitVector& b);

// Careful-test threshold: 4 * sin^2(theta/2). A pair is within radius theta
// iff its squared chord is strictly below this.
double chord2_threshold(double theta_deg);

// Great-circle separation in degrees via the chordal form 2*asin(|a-b|/2).
// Keeps full precision at small angles where acos(a.b) does not.
double angular_distance_deg(const UnitVector& a, const UnitVector& b);

// Strict inclusion test: true iff the separation of a and b is < theta.
bool within_radius(const UnitVector& a, const UnitVector& b, double theta_deg);

// Right-ascension half-width of the bounding box for a theta-circle centered
// at declination dec: |atan(sin t / sqrt(cos(dec-t) cos(dec+t)))|, and 180
// when the circle reaches a pole (|dec| + theta >= 90).
double alpha(double theta_deg, double dec_deg);

}  // namespace zones
