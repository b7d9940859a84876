#include "zones/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "zones/errors.hpp"

namespace zones {

namespace {

// RFC-4180-style line splitting: quoted fields, doubled-quote escapes.
std::vector<std::string> split_csv(const std::string& line, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("row " + std::to_string(row) + ": unterminated quote");
    fields.push_back(std::move(cur));
    return fields;
}

std::string_view trimmed_view(const std::string& s) {
    std::string_view v(s);
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
}

double parse_field_double(const std::string& s, std::size_t row, const std::string& col) {
    const auto v0 = trimmed_view(s);
    double v = 0.0;
    auto res = std::from_chars(v0.data(), v0.data() + v0.size(), v);
    if (v0.empty() || res.ec != std::errc{} || res.ptr != v0.data() + v0.size())
        throw DataError("row " + std::to_string(row) + ": non-numeric " + col + " '" + s + "'");
    return v;
}

std::int64_t parse_field_int(const std::string& s, std::size_t row, const std::string& col) {
    const auto v0 = trimmed_view(s);
    std::int64_t v = 0;
    auto res = std::from_chars(v0.data(), v0.data() + v0.size(), v);
    if (v0.empty() || res.ec != std::errc{} || res.ptr != v0.data() + v0.size())
        throw DataError("row " + std::to_string(row) + ": non-integer " + col + " '" + s + "'");
    return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

// 53-bit uniform in [0, 1).
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

PointRecord make_record(char type, std::int64_t id, double ra, double dec) {
    PointRecord p;
    p.objType = type;
    p.objID = id;
    p.coord = {ra, dec};
    p.unit = to_unit_vector(p.coord);
    return p;
}

}  // namespace

Catalog parse_catalog(const std::filesystem::path& path, const CatalogSchema& schema,
                      char obj_type) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open catalog: " + path.string());

    Catalog cat;
    cat.payloadNames = schema.payloadColumns;

    std::string line;
    if (!std::getline(f, line)) throw DataError("empty catalog: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_csv(line, 0);
    const std::size_t id_col = column_index(header, schema.idColumn);
    const std::size_t lon_col = column_index(header, schema.lonColumn);
    const std::size_t lat_col = column_index(header, schema.latColumn);
    std::vector<std::size_t> payload_cols;
    for (const auto& name : schema.payloadColumns) payload_cols.push_back(column_index(header, name));

    std::unordered_set<std::int64_t> seen;
    std::size_t row = 0;
    while (std::getline(f, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line, row);
        if (fields.size() != header.size())
            throw DataError("row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));

        const std::int64_t id = parse_field_int(fields[id_col], row, schema.idColumn);
        const double lon = parse_field_double(fields[lon_col], row, schema.lonColumn);
        const double lat = parse_field_double(fields[lat_col], row, schema.latColumn);
        if (!(lat >= -90.0 && lat <= 90.0))
            throw DataError("row " + std::to_string(row) + ": latitude " + fields[lat_col] +
                            " out of [-90, 90]");
        if (!seen.insert(id).second)
            throw DataError("row " + std::to_string(row) + ": duplicate id " + std::to_string(id));

        cat.points.push_back(make_record(obj_type, id, normalize_ra(lon), lat));
        if (!payload_cols.empty()) {
            std::vector<std::string> values;
            values.reserve(payload_cols.size());
            for (std::size_t c : payload_cols) values.push_back(fields[c]);
            cat.payload.emplace(id, std::move(values));
        }
    }
    return cat;
}

Distribution parse_distribution(const std::string& name) {
    if (name == "uniform" || name == "uniform-sphere") return Distribution::uniform_sphere;
    if (name == "polar-cap") return Distribution::polar_cap;
    if (name == "meridian-strip") return Distribution::meridian_strip;
    throw DataError("unknown distribution '" + name + "'");
}

std::vector<PointRecord> generate_synthetic(std::size_t n, std::uint64_t seed, Distribution dist,
                                            char obj_type) {
    std::mt19937_64 rng(seed);
    std::vector<PointRecord> out;
    out.reserve(n);
    const double cap_z_min = std::cos(to_radians(2.0));
    for (std::size_t i = 0; i < n; ++i) {
        double ra = 0.0, dec = 0.0;
        switch (dist) {
            case Distribution::uniform_sphere: {
                ra = 360.0 * next_unit(rng);
                const double z = 2.0 * next_unit(rng) - 1.0;
                dec = to_degrees(std::asin(z));
                break;
            }
            case Distribution::polar_cap: {
                ra = 360.0 * next_unit(rng);
                const double z = 1.0 - next_unit(rng) * (1.0 - cap_z_min);
                dec = to_degrees(std::asin(std::min(z, 1.0)));
                break;
            }
            case Distribution::meridian_strip: {
                ra = normalize_ra(2.0 * next_unit(rng) - 1.0);
                const double z = 2.0 * next_unit(rng) - 1.0;
                dec = to_degrees(std::asin(z));
                break;
            }
        }
        out.push_back(make_record(obj_type, static_cast<std::int64_t>(i) + 1, ra, dec));
    }
    return out;
}

}  // namespace zones
