#include "zones/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "zones/errors.hpp"

namespace zones::oracle {

std::vector<Neighbor> brute_neighbors(std::span<const PointRecord> points,
                                      const SphericalCoord& center, double theta) {
    const UnitVector c = to_unit_vector(center);
    std::vector<Neighbor> out;
    for (const auto& p : points)
        if (within_radius(c, p.unit, theta))
            out.push_back({p.objID, angular_distance_deg(c, p.unit)});
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.objID < b.objID;
    });
    return out;
}

std::vector<MatchPair> brute_match(std::span<const PointRecord> a,
                                   std::span<const PointRecord> b, double theta, bool self_mode) {
    std::vector<MatchPair> out;
    for (const auto& p : a) {
        for (const auto& q : b) {
            if (self_mode && p.objID == q.objID) continue;
            if (!within_radius(p.unit, q.unit, theta)) continue;
            out.push_back({p.objID, q.objID, angular_distance_deg(p.unit, q.unit)});
        }
    }
    std::sort(out.begin(), out.end(), [](const MatchPair& x, const MatchPair& y) {
        return x.objID1 != y.objID1 ? x.objID1 < y.objID1 : x.objID2 < y.objID2;
    });
    return out;
}

double alpha_by_sampling(double theta, double dec, long samples) {
    if (!(std::fabs(dec) + theta < 90.0))
        throw Error("alpha_by_sampling requires |dec| + theta < 90");
    if (samples < 1) throw Error("alpha_by_sampling needs at least one sample");

    const double t = to_radians(theta);
    const double d = to_radians(dec);
    // Tangent frame at (ra=0, dec): n points at the center, u north, w west.
    // Circle point: x = n cos t + u sin t cos phi + w sin t sin phi, giving
    //   x = cos t cos d - sin t sin d cos phi,  y = -sin t sin phi.
    const double ax = std::cos(t) * std::cos(d);
    const double bx = -std::sin(t) * std::sin(d);
    const double cy = -std::sin(t);

    // argmax |atan2(y, x)| == argmin x/hypot(x, y), cos being monotone on
    // [0, pi]; this keeps the sweep free of per-sample trig.
    const double step = 2.0 * kPi / static_cast<double>(samples);
    const double cos_step = std::cos(step);
    const double sin_step = std::sin(step);
    double cos_phi = 1.0, sin_phi = 0.0;
    double best = 2.0;
    long best_i = 0;
    for (long i = 0; i < samples; ++i) {
        if ((i & 4095) == 0) {  // resync the rotation recurrence
            cos_phi = std::cos(step * static_cast<double>(i));
            sin_phi = std::sin(step * static_cast<double>(i));
        }
        const double x = ax + bx * cos_phi;
        const double y = cy * sin_phi;
        const double q = x / std::sqrt(x * x + y * y);
        if (q < best) {
            best = q;
            best_i = i;
        }
        const double next_cos = cos_phi * cos_step - sin_phi * sin_step;
        sin_phi = sin_phi * cos_step + cos_phi * sin_step;
        cos_phi = next_cos;
    }

    const double phi = step * static_cast<double>(best_i);
    const double x = ax + bx * std::cos(phi);
    const double y = cy * std::sin(phi);
    return to_degrees(std::fabs(std::atan2(y, x)));
}

namespace {

template <typename T, typename Key>
bool compare_sets(std::span<const T> a, std::span<const T> b, double theta, double band,
                  Key key, double (*dist)(const T&), std::string* detail, const char* what) {
    std::vector<T> only_a, only_b;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && key(a[i]) < key(b[j]))) {
            only_a.push_back(a[i++]);
        } else if (i >= a.size() || key(b[j]) < key(a[i])) {
            only_b.push_back(b[j++]);
        } else {
            ++i;
            ++j;
        }
    }
    for (const auto& list : {only_a, only_b}) {
        for (const auto& e : list) {
            if (std::fabs(dist(e) - theta) <= band) continue;
            if (detail)
                *detail = std::string(what) + " differ away from the boundary (distance " +
                          std::to_string(dist(e)) + ", theta " + std::to_string(theta) + ")";
            return false;
        }
    }
    return true;
}

}  // namespace

bool same_neighbors(std::span<const Neighbor> a, std::span<const Neighbor> b, double theta,
                    double boundary_band, std::string* detail) {
    auto key = [](const Neighbor& n) { return n.objID; };
    auto sort_by_id = [&](std::span<const Neighbor> s) {
        std::vector<Neighbor> v(s.begin(), s.end());
        std::sort(v.begin(), v.end(),
                  [](const Neighbor& x, const Neighbor& y) { return x.objID < y.objID; });
        return v;
    };
    const auto va = sort_by_id(a), vb = sort_by_id(b);
    return compare_sets<Neighbor>(
        va, vb, theta, boundary_band, key, +[](const Neighbor& n) { return n.distance; }, detail,
        "neighbor sets");
}

bool same_pairs(std::span<const MatchPair> a, std::span<const MatchPair> b, double theta,
                double boundary_band, std::string* detail) {
    auto key = [](const MatchPair& p) { return std::pair(p.objID1, p.objID2); };
    return compare_sets<MatchPair>(
        a, b, theta, boundary_band, key, +[](const MatchPair& p) { return p.distance; }, detail,
        "pair sets");
}

}  // namespace zones::oracle
