#include "zones/match.hpp"

#include <algorithm>
#include <cmath>

#include "zones/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace zones {

namespace {

enum class RowRule { all, id_less, id_neq };

int resolve_workers(int requested) {
#if defined(_OPENMP)
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

bool pair_less(const MatchPair& a, const MatchPair& b) {
    return a.objID1 != b.objID1 ? a.objID1 < b.objID1 : a.objID2 < b.objID2;
}

// One zone-pair unit: native entries of A in zone1 against all entries of B
// in zone2, restricted by the conservative ra band, the dec band and the
// careful test. A band of 180 means the circle reaches a pole: every native
// of the zone is a candidate and margins would only duplicate them.
void scan_unit(const ZoneIndexStore& store_a, char type_a, const ZoneIndexStore& store_b,
               char type_b, const ZoneZonePair& unit, double theta, RowRule rule,
               std::vector<MatchPair>& out) {
    auto seg_a = store_a.zone_span(type_a, unit.zone1);
    auto seg_b = store_b.zone_span(type_b, unit.zone2);
    if (seg_a.empty() || seg_b.empty()) return;

    const double threshold = chord2_threshold(theta);
    const bool full_range = unit.alpha >= 180.0;
    for (const auto& e1 : seg_a) {
        if (e1.margin) continue;
        auto candidates =
            full_range ? seg_b : ra_range(seg_b, e1.ra - unit.alpha, e1.ra + unit.alpha);
        for (const auto& e2 : candidates) {
            if (full_range && e2.margin) continue;
            if (e2.dec < e1.dec - theta || e2.dec > e1.dec + theta) continue;
            if (rule == RowRule::id_less && !(e1.objID < e2.objID)) continue;
            if (rule == RowRule::id_neq && e1.objID == e2.objID) continue;
            const double c2 = chord_squared(e1.unit, e2.unit);
            if (!(c2 < threshold)) continue;
            out.push_back({e1.objID, e2.objID, angular_distance_deg(e1.unit, e2.unit)});
        }
    }
}

std::vector<MatchPair> run_units(const MatchJob& job, std::span<const ZoneZonePair> units,
                                 const std::vector<RowRule>& rules, int workers) {
    std::vector<std::vector<MatchPair>> buffers(units.size());
    const auto n = static_cast<std::int64_t>(units.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        scan_unit(*job.storeA, job.objTypeA, *job.storeB, job.objTypeB,
                  units[static_cast<std::size_t>(i)], job.theta,
                  rules[static_cast<std::size_t>(i)], buffers[static_cast<std::size_t>(i)]);
    }
    (void)workers;

    std::size_t total = 0;
    for (const auto& b : buffers) total += b.size();
    std::vector<MatchPair> out;
    out.reserve(total);
    for (const auto& b : buffers) out.insert(out.end(), b.begin(), b.end());
    return out;
}

void validate_job(const MatchJob& job, MatchMode expected) {
    if (job.mode != expected) throw Error("match job mode does not match the entry point");
    if (!job.storeA || !job.storeB) throw Error("match job needs two stores");
    if (!(job.theta > 0.0)) throw Error("match theta must be > 0");
    const auto &a = job.storeA->config(), &b = job.storeB->config();
    if (job.theta > a.theta || job.theta > b.theta)
        throw Error("match theta exceeds the design theta of the index");
    if (job.storeA != job.storeB) {
        if (a.zoneHeight != b.zoneHeight || a.theta != b.theta)
            throw Error("cross-store match requires identical zoneHeight and design theta");
    }
}

}  // namespace

std::vector<ZoneZonePair> partition_workload(std::span<const ZoneZonePair> pairs, MatchMode mode) {
    std::vector<ZoneZonePair> units;
    units.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (mode == MatchMode::self && p.zone1 > p.zone2) continue;
        units.push_back(p);
    }
    return units;
}

std::vector<MatchPair> cross_match(const MatchJob& job, const MatchOptions& opts) {
    validate_job(job, MatchMode::cross);
    if (job.storeA == job.storeB && job.objTypeA == job.objTypeB)
        throw Error("cross_match of a dataset with itself; use self_match");

    const auto units = partition_workload(job.storeA->zone_pairs(), MatchMode::cross);
    const std::vector<RowRule> rules(units.size(), RowRule::all);
    auto out = run_units(job, units, rules, resolve_workers(opts.workers));
    std::sort(out.begin(), out.end(), pair_less);
    return out;
}

std::vector<MatchPair> self_match(const MatchJob& job, const MatchOptions& opts,
                                  MatchStats* stats) {
    validate_job(job, MatchMode::self);
    if (job.storeA != job.storeB || job.objTypeA != job.objTypeB)
        throw Error("self_match needs one dataset");

    const int workers = resolve_workers(opts.workers);

    if (!opts.useSymmetry) {
        // Reference path: evaluate every ordered pair directly.
        const auto units = partition_workload(job.storeA->zone_pairs(), MatchMode::cross);
        const std::vector<RowRule> rules(units.size(), RowRule::id_neq);
        auto out = run_units(job, units, rules, workers);
        std::sort(out.begin(), out.end(), pair_less);
        if (stats) stats->halfPairs = out.size() / 2;
        return out;
    }

    // Phase 1: zone1 <= zone2 only. Same-zone units halve by objID order;
    // cross-zone units take every row, since the dropped (zone2, zone1) unit
    // would have found exactly the mirrored pairs.
    const auto units = partition_workload(job.storeA->zone_pairs(), MatchMode::self);
    std::vector<RowRule> rules(units.size());
    for (std::size_t i = 0; i < units.size(); ++i)
        rules[i] = units[i].zone1 == units[i].zone2 ? RowRule::id_less : RowRule::all;
    auto half = run_units(job, units, rules, workers);
    if (stats) stats->halfPairs = half.size();

    // Phase 2: mirror, no recomputation.
    std::vector<MatchPair> out;
    out.reserve(half.size() * 2);
    out.insert(out.end(), half.begin(), half.end());
    for (const auto& p : half) out.push_back({p.objID2, p.objID1, p.distance});
    std::sort(out.begin(), out.end(), pair_less);
    return out;
}

}  // namespace zones
