#include "zones/query.hpp"

#include <algorithm>
#include <cmath>

#include "zones/errors.hpp"

namespace zones {

QueryPlan plan_query(const QuerySpec& spec, const IndexConfig& config) {
    QueryPlan plan;
    plan.minZone = zone_of(spec.center.dec - spec.theta, config.zoneHeight);
    plan.maxZone = zone_of(spec.center.dec + spec.theta, config.zoneHeight);
    plan.alpha = alpha(spec.theta, spec.center.dec);
    if (plan.alpha >= 180.0) {
        plan.raLo = -180.0;
        plan.raHi = 540.0;
    } else {
        plan.raLo = spec.center.ra - plan.alpha;
        plan.raHi = spec.center.ra + plan.alpha;
    }
    plan.decLo = spec.center.dec - spec.theta;
    plan.decHi = spec.center.dec + spec.theta;
    return plan;
}

std::vector<Neighbor> points_near_point(const ZoneIndexStore& store, const QuerySpec& spec) {
    if (!(spec.theta > 0.0 && spec.theta <= 180.0))
        throw Error("query theta must be in (0, 180]");
    const auto& cfg = store.config();
    if (cfg.margins == MarginMode::trimmed && spec.theta > cfg.theta)
        throw Error("query theta exceeds the design theta of a trimmed-margin index");

    const QueryPlan plan = plan_query(spec, cfg);
    const UnitVector center = to_unit_vector(spec.center);
    const double threshold = chord2_threshold(spec.theta);

    // Margin copies are complete only within trim_width of the seam; past
    // that, scan every native in the zone instead. Natives alone cover the
    // sphere, so the full-range scan skips margins to avoid double hits.
    const bool full_range =
        plan.alpha >= 180.0 ||
        (cfg.margins == MarginMode::trimmed && plan.alpha > store.trim_width());

    std::vector<Neighbor> out;
    for (std::int32_t z = plan.minZone; z <= plan.maxZone; ++z) {
        auto zone = store.zone_span(spec.objType, z);
        auto candidates = full_range ? zone : ra_range(zone, plan.raLo, plan.raHi);
        for (const auto& e : candidates) {
            if (full_range && e.margin) continue;
            if (e.dec < plan.decLo || e.dec > plan.decHi) continue;
            const double c2 = chord_squared(center, e.unit);
            if (!(c2 < threshold)) continue;
            out.push_back({e.objID, angular_distance_deg(center, e.unit)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.objID < b.objID;
    });
    return out;
}

std::optional<Neighbor> nearest_object(const ZoneIndexStore& store, char obj_type,
                                       const SphericalCoord& center) {
    for (double theta = 0.2;; theta *= 2.0) {
        auto found = points_near_point(store, {obj_type, center, std::min(theta, 180.0)});
        if (!found.empty()) return found.front();
        if (theta >= 180.0) return std::nullopt;
    }
}

}  // namespace zones
