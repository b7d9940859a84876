#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "zones/index.hpp"

namespace zones {

// Column mapping for a catalog CSV. The id/lon/lat columns are required;
// payload columns are carried through for display only.
struct CatalogSchema {
    std::string idColumn = "id";
    std::string lonColumn = "lon";
    std::string latColumn = "lat";
    std::vector<std::string> payloadColumns;
};

struct Catalog {
    std::vector<PointRecord> points;  // input row order
    std::vector<std::string> payloadNames;
    std::unordered_map<std::int64_t, std::vector<std::string>> payload;
};

// Parses a header-first CSV into PointRecords. Longitudes are normalized to
// ra in [0, 360); latitudes must be in [-90, 90]. Errors carry the offending
// row number.
Catalog parse_catalog(const std::filesystem::path& path, const CatalogSchema& schema,
                      char obj_type);

enum class Distribution {
    uniform_sphere,   // area-uniform over the whole sphere
    polar_cap,        // within 2 degrees of the north pole
    meridian_strip,   // within +-1 degree of ra = 0/360
};

Distribution parse_distribution(const std::string& name);

// Deterministic for a fixed seed; objIDs run 1..n.
std::vector<PointRecord> generate_synthetic(std::size_t n, std::uint64_t seed, Distribution dist,
                                            char obj_type);

}  // namespace zones
