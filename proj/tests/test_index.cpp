#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "zones/errors.hpp"
#include "zones/index.hpp"
#include "zones/ingest.hpp"

using namespace zones;

namespace {

const double kTenArcmin = 10.0 / 60.0;

PointRecord pt(char type, std::int64_t id, double ra, double dec) {
    return {type, id, {ra, dec}, to_unit_vector({ra, dec})};
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("zone_of floor semantics") {
    CHECK(zone_of(0.0, kTenArcmin) == 0);
    CHECK(zone_of(-0.01, kTenArcmin) == -1);
    CHECK(zone_of(37.7, kTenArcmin) == 226);
    CHECK(zone_of(89.9999, 1.0) == 89);
    CHECK(zone_of(-90.0, 1.0) == -90);
}

TEST_CASE("empty input still yields a full zone table") {
    IndexConfig cfg(1.0, kTenArcmin);
    auto store = build_index({}, cfg);
    CHECK(store.entries().empty());
    REQUIRE(!store.zones().empty());
    // Full closed range, covering at least [-90 - h, 90 + h] (up to rounding)
    // and every zone an entry can land in.
    CHECK(store.zones().front().latMin <= -(90.0 + kTenArcmin) + 1e-9);
    CHECK(store.zones().back().latMax >= 90.0 + kTenArcmin - 1e-9);
    CHECK(store.zones().front().zone <= zone_of(-90.0, kTenArcmin));
    CHECK(store.zones().back().zone >= zone_of(90.0, kTenArcmin));
    CHECK(store.zones().front().zone == -store.zones().back().zone);
    for (std::size_t i = 1; i < store.zones().size(); ++i)
        CHECK(store.zones()[i].zone == store.zones()[i - 1].zone + 1);
}

TEST_CASE("single point gains exactly one margin copy") {
    IndexConfig cfg(1.0, kTenArcmin);
    std::vector<PointRecord> points{pt('P', 7, 10.0, 0.0)};
    auto store = build_index(points, cfg);
    REQUIRE(store.entries().size() == 2);
    const auto& native = store.entries()[1];  // margin copy at 370 sorts after
    const auto& margin = store.entries()[1].margin ? store.entries()[1] : store.entries()[0];
    CHECK(store.native_count('P') == 1);
    CHECK(store.total_count('P') == 2);
    CHECK(margin.margin);
    CHECK(margin.ra == doctest::Approx(370.0));
    CHECK(margin.zone == 0);
    CHECK(native.zone == 0);
}

TEST_CASE("margin shifts follow the 180-degree rule") {
    IndexConfig cfg(1.0, kTenArcmin);
    std::vector<PointRecord> points{pt('P', 1, 350.0, 5.0), pt('P', 2, 10.0, 5.0)};
    auto store = build_index(points, cfg);
    bool saw_left = false, saw_right = false;
    for (const auto& e : store.entries()) {
        if (!e.margin) continue;
        if (e.objID == 1) {
            CHECK(e.ra == doctest::Approx(-10.0));
            saw_left = true;
        } else {
            CHECK(e.ra == doctest::Approx(370.0));
            saw_right = true;
        }
    }
    CHECK(saw_left);
    CHECK(saw_right);
}

TEST_CASE("full margins double every type") {
    auto pts = generate_synthetic(500, 21, Distribution::uniform_sphere, 'P');
    auto store = build_index(pts, IndexConfig(1.0, kTenArcmin));
    CHECK(store.native_count('P') == 500);
    CHECK(store.total_count('P') == 1000);
}

TEST_CASE("trimmed margins only keep copies near the seam") {
    auto pts = generate_synthetic(2000, 22, Distribution::uniform_sphere, 'P');
    auto full = build_index(pts, IndexConfig(1.0, kTenArcmin));
    auto trimmed = build_index(pts, IndexConfig(1.0, kTenArcmin, MarginMode::trimmed));
    CHECK(trimmed.total_count('P') < full.total_count('P'));
    CHECK(trimmed.native_count('P') == 2000);
    const double window = trimmed.trim_width();
    CHECK(window > 0.0);
    CHECK(window < 90.0);
    for (const auto& e : trimmed.entries())
        if (e.margin) {
            CHECK(e.ra >= -window);
            CHECK(e.ra <= 360.0 + window);
        }
}

TEST_CASE("duplicate ids are rejected with the duplicate named") {
    std::vector<PointRecord> points{pt('P', 7, 10.0, 0.0), pt('P', 7, 20.0, 1.0)};
    CHECK_THROWS_WITH_AS(build_index(points, IndexConfig(1.0)), doctest::Contains("7"),
                         DataError);
    // Same id under different types is fine.
    points[1].objType = 'S';
    CHECK_NOTHROW(build_index(points, IndexConfig(1.0)));
}

TEST_CASE("zonezone pair counts") {
    // theta == h: each interior zone pairs with itself and one either side.
    {
        auto store = build_index({}, IndexConfig(1.0, 1.0));
        auto pairs = store.pairs_for(10);
        CHECK(pairs.size() == 3);
    }
    // theta = 1, h = 10': 6 neighbors either side, 13 pairs per interior zone.
    {
        auto store = build_index({}, IndexConfig(1.0, kTenArcmin));
        auto pairs = store.pairs_for(100);
        CHECK(pairs.size() == 13);
        for (const auto& p : pairs) {
            CHECK(p.zone2 >= 94);
            CHECK(p.zone2 <= 106);
        }
    }
}

TEST_CASE("zonezone alpha uses zone1's extreme declination") {
    auto store = build_index({}, IndexConfig(1.0, kTenArcmin));
    // Zone 0: latMin = 0, so alpha comes from latMax = h.
    for (const auto& p : store.pairs_for(0)) CHECK(p.alpha == alpha(1.0, kTenArcmin));
    // Zone -1: latMin = -h is negative, alpha at |latMin| = h again.
    for (const auto& p : store.pairs_for(-1)) CHECK(p.alpha == alpha(1.0, kTenArcmin));
    // Polar zone: the band degenerates to 180.
    for (const auto& p : store.pairs_for(zone_of(89.99, kTenArcmin))) CHECK(p.alpha == 180.0);
}

TEST_CASE("zonezone coverage is symmetric") {
    auto store = build_index({}, IndexConfig(2.0, 0.7));
    for (const auto& p : store.zone_pairs()) {
        auto back = store.pairs_for(p.zone2);
        bool found = false;
        for (const auto& q : back) found |= q.zone2 == p.zone1;
        CHECK(found);
    }
}

TEST_CASE("every native entry sits in its computed zone and margins mirror a native") {
    auto pts = generate_synthetic(800, 23, Distribution::meridian_strip, 'M');
    auto store = build_index(pts, IndexConfig(1.5, 0.5));
    std::size_t natives = 0, margins = 0;
    for (const auto& e : store.entries()) {
        if (!e.margin) {
            ++natives;
            CHECK(e.zone == zone_of(e.dec, 0.5));
        } else {
            ++margins;
            // A margin copy keeps zone/dec/unit and its ra is the native's
            // shifted by 360, computed in the same direction as the build.
            auto span = store.zone_span('M', e.zone);
            bool found = false;
            for (const auto& n : span) {
                if (n.margin || n.objID != e.objID) continue;
                const double expected = n.ra >= 180.0 ? n.ra - 360.0 : n.ra + 360.0;
                found |= e.ra == expected && e.dec == n.dec && e.unit == n.unit;
            }
            CHECK(found);
        }
    }
    CHECK(natives == 800);
    CHECK(margins == 800);
}

TEST_CASE("binary range scan equals a linear filter") {
    std::mt19937_64 rng(24);
    auto pts = generate_synthetic(600, 25, Distribution::uniform_sphere, 'P');
    auto store = build_index(pts, IndexConfig(2.0, 1.0));
    for (int i = 0; i < 200; ++i) {
        const auto z = static_cast<std::int32_t>(static_cast<double>(rng() % 181)) - 90;
        const double lo = -30.0 + 420.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const double hi = lo + 50.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        auto span = store.zone_span('P', z);
        auto fast = ra_range(span, lo, hi);
        std::vector<const ZoneEntry*> slow;
        for (const auto& e : span)
            if (e.ra >= lo && e.ra <= hi) slow.push_back(&e);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t k = 0; k < fast.size(); ++k) CHECK(&fast[k] == slow[k]);
    }
}

TEST_CASE("save/load round trip is identity") {
    auto pts = generate_synthetic(300, 26, Distribution::uniform_sphere, 'P');
    for (auto mode : {MarginMode::full, MarginMode::trimmed}) {
        auto store = build_index(pts, IndexConfig(1.0, kTenArcmin, mode));
        const auto path = temp_file("zones_roundtrip.zi");
        save_index(store, path);
        auto loaded = load_index(path);
        CHECK(loaded == store);
        std::filesystem::remove(path);
    }
}

TEST_CASE("rebuilding from the same input is byte-identical") {
    auto pts = generate_synthetic(300, 27, Distribution::polar_cap, 'P');
    const auto p1 = temp_file("zones_det1.zi");
    const auto p2 = temp_file("zones_det2.zi");
    save_index(build_index(pts, IndexConfig(1.0, kTenArcmin)), p1);
    save_index(build_index(pts, IndexConfig(1.0, kTenArcmin)), p2);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(!slurp(p1).empty());
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("load rejects an empty file as a malformed header") {
    const auto path = temp_file("zones_empty.zi");
    std::ofstream(path).close();
    try {
        (void)load_index(path);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadErrorKind::malformed_header);
    }
    std::filesystem::remove(path);
}

TEST_CASE("load rejects a wrong version") {
    const auto path = temp_file("zones_version.zi");
    std::ofstream(path) << "# zones-index 2\n# zoneHeight 1\n# theta 1\n# marginTrim 0\n";
    try {
        (void)load_index(path);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadErrorKind::version_mismatch);
    }
    std::filesystem::remove(path);
}

TEST_CASE("load detects a tampered entry count as a truncated body") {
    auto pts = generate_synthetic(10, 28, Distribution::uniform_sphere, 'P');
    auto store = build_index(pts, IndexConfig(1.0, kTenArcmin));
    const auto path = temp_file("zones_tampered.zi");
    save_index(store, path);
    auto text = slurp(path);
    const auto pos = text.find("# count P 10 20");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 15, "# count P 10 21");
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
    try {
        (void)load_index(path);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadErrorKind::truncated_body);
    }
    std::filesystem::remove(path);
}

TEST_CASE("load rejects garbage rows") {
    const auto path = temp_file("zones_badrow.zi");
    std::ofstream(path) << "# zones-index 1\n# zoneHeight 1\n# theta 1\n# marginTrim 0\n"
                        << "objType,objID,zone,ra,dec,x,y,z,margin\n"
                        << "P,1,0,not-a-number,0,1,0,0,0\n";
    try {
        (void)load_index(path);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadErrorKind::malformed_row);
    }
    std::filesystem::remove(path);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(build_index({}, IndexConfig(0.0)), DataError);
    CHECK_THROWS_AS(build_index({}, IndexConfig(1.0, 0.0)), DataError);
    CHECK_THROWS_AS(build_index({}, IndexConfig(90.0)), DataError);
    // Default zone height is theta.
    IndexConfig cfg(0.25);
    CHECK(cfg.zoneHeight == 0.25);
}
