#include "zones/index.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

#include "zones/errors.hpp"

namespace zones {

namespace {

// floor/ceil of a ratio that is an exact integer in real arithmetic must not
// drift by one ulp; snap within 1e-9 of an integer.
std::int64_t snapped_floor(double x) {
    const double r = std::round(x);
    if (std::fabs(x - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(x));
}

std::int64_t snapped_ceil(double x) {
    const double r = std::round(x);
    if (std::fabs(x - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(x));
}

std::int32_t table_max_zone(double zone_height) {
    return static_cast<std::int32_t>(snapped_floor((90.0 + zone_height) / zone_height));
}

bool key_less(const ZoneEntry& a, const ZoneEntry& b) {
    return std::tie(a.objType, a.zone, a.ra, a.objID, a.margin) <
           std::tie(b.objType, b.zone, b.ra, b.objID, b.margin);
}

void validate_config(const IndexConfig& cfg) {
    if (!(cfg.zoneHeight > 0.0)) throw DataError("zoneHeight must be > 0");
    if (!(cfg.theta > 0.0 && cfg.theta < 90.0)) throw DataError("theta must be in (0, 90)");
}

double margin_window(const IndexConfig& cfg, std::span<const ZoneRow> zones) {
    switch (cfg.margins) {
        case MarginMode::full:
            return 180.0;
        case MarginMode::none:
            return 0.0;
        case MarginMode::trimmed:
            break;
    }
    // maxAlpha over zones whose extreme declination keeps the circle off the
    // poles; if no zone qualifies there is nothing to trim.
    double w = 0.0;
    bool any = false;
    for (const auto& z : zones) {
        const double extreme = std::max(std::fabs(z.latMin), std::fabs(z.latMax));
        if (extreme + cfg.theta < 90.0) {
            any = true;
            w = std::max(w, alpha(cfg.theta, extreme));
        }
    }
    return any ? w : 180.0;
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

double parse_double(std::string_view s, const char* what, LoadErrorKind kind) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw LoadError(kind, std::string("bad ") + what + " value: '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_int(std::string_view s, const char* what, LoadErrorKind kind) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw LoadError(kind, std::string("bad ") + what + " value: '" + std::string(s) + "'");
    return v;
}

constexpr std::string_view kColumnHeader = "objType,objID,zone,ra,dec,x,y,z,margin";

}  // namespace

std::int32_t zone_of(double dec, double zone_height) {
    return static_cast<std::int32_t>(std::floor(dec / zone_height));
}

std::span<const ZoneEntry> ZoneIndexStore::zone_span(char obj_type, std::int32_t zone) const {
    auto rank = [&](const ZoneEntry& e) {
        if (e.objType != obj_type) return e.objType < obj_type ? -1 : 1;
        if (e.zone != zone) return e.zone < zone ? -1 : 1;
        return 0;
    };
    auto first = std::partition_point(entries_.begin(), entries_.end(),
                                      [&](const ZoneEntry& e) { return rank(e) < 0; });
    auto last = std::partition_point(first, entries_.end(),
                                     [&](const ZoneEntry& e) { return rank(e) <= 0; });
    return {std::to_address(first), static_cast<std::size_t>(last - first)};
}

std::span<const ZoneZonePair> ZoneIndexStore::pairs_for(std::int32_t zone1) const {
    auto first = std::partition_point(zone_pairs_.begin(), zone_pairs_.end(),
                                      [&](const ZoneZonePair& p) { return p.zone1 < zone1; });
    auto last = std::partition_point(first, zone_pairs_.end(),
                                     [&](const ZoneZonePair& p) { return p.zone1 <= zone1; });
    return {std::to_address(first), static_cast<std::size_t>(last - first)};
}

std::vector<char> ZoneIndexStore::obj_types() const {
    std::vector<char> types;
    for (const auto& e : entries_)
        if (types.empty() || types.back() != e.objType) types.push_back(e.objType);
    return types;
}

std::size_t ZoneIndexStore::native_count(char obj_type) const {
    std::size_t n = 0;
    for (const auto& e : entries_)
        if (e.objType == obj_type && !e.margin) ++n;
    return n;
}

std::size_t ZoneIndexStore::total_count(char obj_type) const {
    std::size_t n = 0;
    for (const auto& e : entries_)
        if (e.objType == obj_type) ++n;
    return n;
}

bool ZoneIndexStore::operator==(const ZoneIndexStore& other) const {
    auto cfg = [](const IndexConfig& c) { return std::tie(c.zoneHeight, c.theta, c.margins); };
    if (cfg(config_) != cfg(other.config_)) return false;
    if (entries_ != other.entries_) return false;
    if (zones_.size() != other.zones_.size() || zone_pairs_.size() != other.zone_pairs_.size())
        return false;
    for (std::size_t i = 0; i < zones_.size(); ++i) {
        const auto &a = zones_[i], &b = other.zones_[i];
        if (a.zone != b.zone || a.latMin != b.latMin || a.latMax != b.latMax) return false;
    }
    for (std::size_t i = 0; i < zone_pairs_.size(); ++i) {
        const auto &a = zone_pairs_[i], &b = other.zone_pairs_[i];
        if (a.zone1 != b.zone1 || a.zone2 != b.zone2 || a.alpha != b.alpha) return false;
    }
    return trim_width_ == other.trim_width_;
}

void ZoneIndexStore::finalize() {
    std::sort(entries_.begin(), entries_.end(), key_less);

    const std::int32_t max_zone = table_max_zone(config_.zoneHeight);
    zones_.clear();
    zones_.reserve(static_cast<std::size_t>(2 * max_zone + 1));
    for (std::int32_t z = -max_zone; z <= max_zone; ++z)
        zones_.push_back({z, z * config_.zoneHeight, (z + 1) * config_.zoneHeight});

    zone_pairs_ = build_zonezone(config_, zones_);
    trim_width_ = margin_window(config_, zones_);
}

std::span<const ZoneEntry> ra_range(std::span<const ZoneEntry> zone, double ra_lo, double ra_hi) {
    auto first = std::partition_point(zone.begin(), zone.end(),
                                      [&](const ZoneEntry& e) { return e.ra < ra_lo; });
    auto last = std::partition_point(first, zone.end(),
                                     [&](const ZoneEntry& e) { return e.ra <= ra_hi; });
    return zone.subspan(static_cast<std::size_t>(first - zone.begin()),
                        static_cast<std::size_t>(last - first));
}

ZoneIndexStore build_index(std::span<const PointRecord> points, const IndexConfig& config) {
    validate_config(config);
    ZoneIndexStore store(config);
    store.entries_.reserve(points.size());

    std::vector<std::pair<char, std::int64_t>> keys;
    keys.reserve(points.size());
    for (const auto& p : points) {
        if (!(p.coord.dec >= -90.0 && p.coord.dec <= 90.0))
            throw DataError("declination out of range for objID " + std::to_string(p.objID));
        if (!(p.coord.ra >= 0.0 && p.coord.ra < 360.0))
            throw DataError("ra not normalized for objID " + std::to_string(p.objID));
        store.entries_.push_back({p.objType, p.objID, zone_of(p.coord.dec, config.zoneHeight),
                                  p.coord.ra, p.coord.dec, p.unit, false});
        keys.emplace_back(p.objType, p.objID);
    }
    std::sort(keys.begin(), keys.end());
    auto dup = std::adjacent_find(keys.begin(), keys.end());
    if (dup != keys.end())
        throw DataError(std::string("duplicate object: type '") + dup->first + "' objID " +
                        std::to_string(dup->second));

    store.finalize();
    if (config.margins != MarginMode::none) store = add_margins(std::move(store));
    return store;
}

ZoneIndexStore add_margins(ZoneIndexStore store) {
    if (store.config_.margins == MarginMode::none) return store;
    for (const auto& e : store.entries_)
        if (e.margin) throw Error("add_margins: store already has margin entries");

    const bool trimmed = store.config_.margins == MarginMode::trimmed;
    const double window = store.trim_width_;
    std::vector<ZoneEntry> copies;
    copies.reserve(store.entries_.size());
    for (const auto& e : store.entries_) {
        ZoneEntry c = e;
        c.margin = true;
        c.ra = e.ra >= 180.0 ? e.ra - 360.0 : e.ra + 360.0;
        if (trimmed && (c.ra < -window || c.ra > 360.0 + window)) continue;
        copies.push_back(c);
    }
    store.entries_.insert(store.entries_.end(), copies.begin(), copies.end());
    store.finalize();
    return store;
}

std::vector<ZoneZonePair> build_zonezone(const IndexConfig& config, std::span<const ZoneRow> zones) {
    const auto reach = static_cast<std::int32_t>(snapped_ceil(config.theta / config.zoneHeight));
    std::vector<ZoneZonePair> pairs;
    if (zones.empty()) return pairs;
    const std::int32_t lo = zones.front().zone;
    const std::int32_t hi = zones.back().zone;
    pairs.reserve(zones.size() * (2 * static_cast<std::size_t>(reach) + 1));
    for (const auto& z1 : zones) {
        const double band = z1.latMin < 0.0 ? alpha(config.theta, z1.latMin)
                                            : alpha(config.theta, z1.latMax);
        for (std::int32_t z2 = std::max(lo, z1.zone - reach); z2 <= std::min(hi, z1.zone + reach); ++z2)
            pairs.push_back({z1.zone, z2, band});
    }
    return pairs;
}

void save_index(const ZoneIndexStore& store, const std::filesystem::path& path) {
    if (store.config().margins == MarginMode::none)
        throw Error("save_index: margin-less stores are in-memory test fixtures");

    std::string out;
    out.reserve(64 * store.entries().size() + 256);
    out += "# zones-index 1\n# zoneHeight ";
    append_double(out, store.config().zoneHeight);
    out += "\n# theta ";
    append_double(out, store.config().theta);
    out += "\n# marginTrim ";
    out += store.config().margins == MarginMode::trimmed ? '1' : '0';
    out += '\n';
    for (char t : store.obj_types()) {
        out += "# count ";
        out += t;
        out += ' ';
        out += std::to_string(store.native_count(t));
        out += ' ';
        out += std::to_string(store.total_count(t));
        out += '\n';
    }
    out += kColumnHeader;
    out += '\n';
    for (const auto& e : store.entries()) {
        out += e.objType;
        out += ',';
        out += std::to_string(e.objID);
        out += ',';
        out += std::to_string(e.zone);
        out += ',';
        append_double(out, e.ra);
        out += ',';
        append_double(out, e.dec);
        out += ',';
        append_double(out, e.unit.x);
        out += ',';
        append_double(out, e.unit.y);
        out += ',';
        append_double(out, e.unit.z);
        out += ',';
        out += e.margin ? '1' : '0';
        out += '\n';
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open for writing: " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("write failed: " + path.string());
}

ZoneIndexStore load_index(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open index file: " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string_view line(text.data() + pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    auto header_field = [&](std::size_t i, std::string_view prefix) -> std::string_view {
        if (i >= lines.size() || !lines[i].starts_with(prefix))
            throw LoadError(LoadErrorKind::malformed_header,
                            "missing '" + std::string(prefix) + "' header line");
        return lines[i].substr(prefix.size());
    };

    if (lines.empty() || !lines[0].starts_with("# zones-index "))
        throw LoadError(LoadErrorKind::malformed_header, "not a zones index file");
    const auto version =
        parse_int(lines[0].substr(14), "version", LoadErrorKind::malformed_header);
    if (version != 1)
        throw LoadError(LoadErrorKind::version_mismatch,
                        "unsupported index version " + std::to_string(version));

    const double zone_height =
        parse_double(header_field(1, "# zoneHeight "), "zoneHeight", LoadErrorKind::malformed_header);
    const double theta =
        parse_double(header_field(2, "# theta "), "theta", LoadErrorKind::malformed_header);
    const auto trim_flag =
        parse_int(header_field(3, "# marginTrim "), "marginTrim", LoadErrorKind::malformed_header);
    if (trim_flag != 0 && trim_flag != 1)
        throw LoadError(LoadErrorKind::malformed_header, "marginTrim flag must be 0 or 1");

    std::size_t i = 4;
    std::vector<std::pair<char, std::pair<std::int64_t, std::int64_t>>> declared;
    while (i < lines.size() && lines[i].starts_with("# count ")) {
        std::string_view rest = lines[i].substr(8);
        if (rest.size() < 2 || rest[1] != ' ')
            throw LoadError(LoadErrorKind::malformed_header, "bad count line");
        const char type = rest[0];
        rest.remove_prefix(2);
        const std::size_t sp = rest.find(' ');
        if (sp == std::string_view::npos)
            throw LoadError(LoadErrorKind::malformed_header, "bad count line");
        const auto native = parse_int(rest.substr(0, sp), "native count", LoadErrorKind::malformed_header);
        const auto total = parse_int(rest.substr(sp + 1), "total count", LoadErrorKind::malformed_header);
        declared.emplace_back(type, std::make_pair(native, total));
        ++i;
    }

    if (i >= lines.size() || lines[i] != kColumnHeader)
        throw LoadError(LoadErrorKind::malformed_header, "missing column header line");
    ++i;

    IndexConfig cfg(theta, zone_height,
                    trim_flag == 1 ? MarginMode::trimmed : MarginMode::full);
    try {
        validate_config(cfg);
    } catch (const DataError& e) {
        throw LoadError(LoadErrorKind::malformed_header, e.what());
    }

    ZoneIndexStore store(cfg);
    const ZoneEntry* prev = nullptr;
    for (std::size_t row = 1; i < lines.size(); ++i, ++row) {
        std::string_view line = lines[i];
        std::string_view fields[9];
        std::size_t start = 0;
        for (int k = 0; k < 9; ++k) {
            const std::size_t comma = k == 8 ? line.size() : line.find(',', start);
            if (comma == std::string_view::npos)
                throw LoadError(LoadErrorKind::malformed_row,
                                "row " + std::to_string(row) + ": expected 9 fields");
            fields[k] = line.substr(start, comma - start);
            start = comma + 1;
        }
        if (fields[0].size() != 1)
            throw LoadError(LoadErrorKind::malformed_row,
                            "row " + std::to_string(row) + ": objType must be one character");
        ZoneEntry e;
        e.objType = fields[0][0];
        e.objID = parse_int(fields[1], "objID", LoadErrorKind::malformed_row);
        e.zone = static_cast<std::int32_t>(parse_int(fields[2], "zone", LoadErrorKind::malformed_row));
        e.ra = parse_double(fields[3], "ra", LoadErrorKind::malformed_row);
        e.dec = parse_double(fields[4], "dec", LoadErrorKind::malformed_row);
        e.unit.x = parse_double(fields[5], "x", LoadErrorKind::malformed_row);
        e.unit.y = parse_double(fields[6], "y", LoadErrorKind::malformed_row);
        e.unit.z = parse_double(fields[7], "z", LoadErrorKind::malformed_row);
        if (fields[8] != "0" && fields[8] != "1")
            throw LoadError(LoadErrorKind::malformed_row,
                            "row " + std::to_string(row) + ": margin must be 0 or 1");
        e.margin = fields[8] == "1";
        if (prev && !key_less(*prev, e))
            throw LoadError(LoadErrorKind::malformed_row,
                            "row " + std::to_string(row) + ": entries out of key order");
        store.entries_.push_back(e);
        prev = &store.entries_.back();
    }

    for (const auto& [type, counts] : declared) {
        std::int64_t native = 0, total = 0;
        for (const auto& e : store.entries_)
            if (e.objType == type) {
                ++total;
                if (!e.margin) ++native;
            }
        if (native != counts.first || total != counts.second)
            throw LoadError(LoadErrorKind::truncated_body,
                            std::string("entry counts for type '") + type +
                                "' do not match header");
    }
    std::int64_t declared_total = 0;
    for (const auto& [type, counts] : declared) declared_total += counts.second;
    if (declared_total != static_cast<std::int64_t>(store.entries_.size()))
        throw LoadError(LoadErrorKind::truncated_body, "body row count does not match header");

    store.finalize();
    return store;
}

}  // namespace zones
