#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zones/index.hpp"
#include "zones/match.hpp"
#include "zones/query.hpp"

namespace zones {

// Serial brute-force references. They share the sphere kernel with the
// engine, so any disagreement isolates the indexing logic.
namespace oracle {

// Linear scan over all points; same predicate and ordering as
// points_near_point.
std::vector<Neighbor> brute_neighbors(std::span<const PointRecord> points,
                                      const SphericalCoord& center, double theta);

// All-pairs scan. self_mode skips equal ids and emits both orders.
std::vector<MatchPair> brute_match(std::span<const PointRecord> a,
                                   std::span<const PointRecord> b, double theta, bool self_mode);

// Independent check of the alpha closed form: sweeps phi over the
// theta-circle built from the tangent frame at (ra=0, dec) and returns the
// largest |atan2(y, x)| seen, in degrees. Requires |dec| + theta < 90.
double alpha_by_sampling(double theta, double dec, long samples);

// Set comparisons with a tolerance band at the radius boundary: elements on
// one side only are ignored when their distance is within boundary_band of
// theta.
bool same_neighbors(std::span<const Neighbor> a, std::span<const Neighbor> b, double theta,
                    double boundary_band, std::string* detail = nullptr);
bool same_pairs(std::span<const MatchPair> a, std::span<const MatchPair> b, double theta,
                double boundary_band, std::string* detail = nullptr);

}  // namespace oracle
}  // namespace zones
