#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zones/index.hpp"
#include "zones/sphere.hpp"

namespace zones {

struct QuerySpec {
    char objType = 0;
    SphericalCoord center;
    double theta = 0.0;
};

struct QueryPlan {
    std::int32_t minZone = 0;
    std::int32_t maxZone = 0;
    double alpha = 0.0;
    double raLo = 0.0;
    double raHi = 0.0;
    double decLo = 0.0;
    double decHi = 0.0;
};

struct Neighbor {
    std::int64_t objID = 0;
    double distance = 0.0;  // degrees

    bool operator==(const Neighbor&) const = default;
};

// Zone range per floor((dec -+ theta)/h) and the alpha-widened ra band; a
// pole-reaching circle (alpha = 180) widens ra to the whole margin-extended
// range [-180, 540].
QueryPlan plan_query(const QuerySpec& spec, const IndexConfig& config);

// All objects of spec.objType strictly within spec.theta of the center,
// sorted by (distance, objID). Rejects theta above the design radius on a
// trimmed-margin store.
std::vector<Neighbor> points_near_point(const ZoneIndexStore& store, const QuerySpec& spec);

// Radius-doubling probe starting at 0.2 degrees; empty optional when the
// radius reaches 180 with no hit.
std::optional<Neighbor> nearest_object(const ZoneIndexStore& store, char obj_type,
                                       const SphericalCoord& center);

}  // namespace zones
