#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "zones/sphere.hpp"

namespace zones {

enum class MarginMode {
    full,     // every entry gets one +-360 copy
    trimmed,  // copies kept only within the maxAlpha window around the seam
    none,     // no copies; reproduces the naive wraparound failure (tests only)
};

struct IndexConfig {
    // Zone height defaults to theta: the optimal height when the match
    // radius is known up front.
    explicit IndexConfig(double theta_deg, std::optional<double> zone_height = std::nullopt,
                         MarginMode margin_mode = MarginMode::full)
        : zoneHeight(zone_height.value_or(theta_deg)), theta(theta_deg), margins(margin_mode) {}

    double zoneHeight;
    double theta;
    MarginMode margins;
};

// One catalog object, ready for indexing.
struct PointRecord {
    char objType = 0;
    std::int64_t objID = 0;
    SphericalCoord coord;
    UnitVector unit;
};

// One row of the zone index. Margin copies keep the native zone and shift ra
// by exactly +-360.
struct ZoneEntry {
    char objType = 0;
    std::int64_t objID = 0;
    std::int32_t zone = 0;
    double ra = 0.0;
    double dec = 0.0;
    UnitVector unit;
    bool margin = false;

    bool operator==(const ZoneEntry&) const = default;
};

struct ZoneRow {
    std::int32_t zone = 0;
    double latMin = 0.0;
    double latMax = 0.0;
};

struct ZoneZonePair {
    std::int32_t zone1 = 0;
    std::int32_t zone2 = 0;
    double alpha = 0.0;  // conservative band at zone1's extreme declination
};

// zoneNumber = floor(dec / zoneHeight); negative declinations floor downward.
std::int32_t zone_of(double dec, double zone_height);

// Immutable after build; share freely across threads for reads.
class ZoneIndexStore {
public:
    const IndexConfig& config() const { return config_; }
    std::span<const ZoneEntry> entries() const { return entries_; }
    std::span<const ZoneRow> zones() const { return zones_; }
    std::span<const ZoneZonePair> zone_pairs() const { return zone_pairs_; }

    // Widest margin window actually present: 180 for full margins, the
    // maxAlpha window for trimmed ones, 0 when margins were skipped.
    double trim_width() const { return trim_width_; }

    // Entries of one (objType, zone) bucket, in ra order.
    std::span<const ZoneEntry> zone_span(char obj_type, std::int32_t zone) const;

    // Zone pairs with the given zone1, in zone2 order.
    std::span<const ZoneZonePair> pairs_for(std::int32_t zone1) const;

    std::vector<char> obj_types() const;
    std::size_t native_count(char obj_type) const;
    std::size_t total_count(char obj_type) const;

    bool operator==(const ZoneIndexStore&) const;

private:
    friend ZoneIndexStore build_index(std::span<const PointRecord>, const IndexConfig&);
    friend ZoneIndexStore add_margins(ZoneIndexStore store);
    friend ZoneIndexStore load_index(const std::filesystem::path&);

    explicit ZoneIndexStore(const IndexConfig& cfg) : config_(cfg) {}
    void finalize();  // sort entries, rebuild zones/pairs/trim width

    IndexConfig config_;
    std::vector<ZoneEntry> entries_;
    std::vector<ZoneRow> zones_;
    std::vector<ZoneZonePair> zone_pairs_;
    double trim_width_ = 0.0;
};

// Subrange of a zone span with ra in [ra_lo, ra_hi], by binary search.
std::span<const ZoneEntry> ra_range(std::span<const ZoneEntry> zone, double ra_lo, double ra_hi);

// Builds the full index: native entries, margin copies per config.margins,
// the zone table and the zone-pair table. Rejects duplicate (objType, objID).
ZoneIndexStore build_index(std::span<const PointRecord> points, const IndexConfig& config);

// Adds margin copies to a store that has native entries only. No-op when the
// store was configured with MarginMode::none.
ZoneIndexStore add_margins(ZoneIndexStore store);

// Zone pair table: each zone against every zone within ceil(theta/zoneHeight),
// with alpha taken at zone1's extreme declination.
std::vector<ZoneZonePair> build_zonezone(const IndexConfig& config, std::span<const ZoneRow> zones);

// Versioned text format; identical store -> byte-identical file.
void save_index(const ZoneIndexStore& store, const std::filesystem::path& path);
ZoneIndexStore load_index(const std::filesystem::path& path);

}  // namespace zones
