#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zones/index.hpp"

namespace zones {

enum class MatchMode { self, cross };

struct MatchPair {
    std::int64_t objID1 = 0;
    std::int64_t objID2 = 0;
    double distance = 0.0;  // degrees

    bool operator==(const MatchPair&) const = default;
};

struct MatchJob {
    const ZoneIndexStore* storeA = nullptr;
    const ZoneIndexStore* storeB = nullptr;  // equal to storeA for self-match
    char objTypeA = 0;
    char objTypeB = 0;
    double theta = 0.0;
    MatchMode mode = MatchMode::cross;
};

struct MatchOptions {
    int workers = 0;          // 0 = all hardware threads
    bool useSymmetry = true;  // self-match only: half-pairs + mirror
};

struct MatchStats {
    std::size_t halfPairs = 0;  // phase-1 pair count of a symmetric self-match
};

// Work units for the zone-pair sweep: self-match keeps only zone1 <= zone2
// (the mirror phase restores the rest), cross-match keeps every pair.
std::vector<ZoneZonePair> partition_workload(std::span<const ZoneZonePair> pairs, MatchMode mode);

// Batch join of native A-entries against B-entries over the zone-pair table.
// Output is sorted by (objID1, objID2) and identical for any worker count.
std::vector<MatchPair> cross_match(const MatchJob& job, const MatchOptions& opts = {});

// Symmetric variant: computes half the pairs, then appends the mirror image.
std::vector<MatchPair> self_match(const MatchJob& job, const MatchOptions& opts = {},
                                  MatchStats* stats = nullptr);

}  // namespace zones
