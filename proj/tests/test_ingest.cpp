#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "zones/errors.hpp"
#include "zones/ingest.hpp"

using namespace zones;

namespace {

std::filesystem::path write_temp(const char* name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path, std::ios::binary | std::ios::trunc) << content;
    return path;
}

const CatalogSchema kPlaceSchema{"PlaceID", "Lon", "Lat", {"PlaceName", "State"}};

}  // namespace

TEST_CASE("parse_catalog maps USGS-style rows") {
    auto path = write_temp("zones_cat.csv",
                           "PlaceID,PlaceName,State,Lat,Lon\n"
                           "1,San Francisco,CA,37.7933,-122.5548\n"
                           "2,\"Town, The\",NV,40.0,120.25\n");
    auto cat = parse_catalog(path, kPlaceSchema, 'P');
    REQUIRE(cat.points.size() == 2);
    CHECK(cat.points[0].objID == 1);
    CHECK(cat.points[0].coord.ra == doctest::Approx(237.4452).epsilon(1e-12));
    CHECK(cat.points[0].coord.dec == doctest::Approx(37.7933));
    CHECK(cat.points[1].coord.ra == doctest::Approx(120.25));
    CHECK(cat.payload.at(1)[0] == "San Francisco");
    CHECK(cat.payload.at(2)[0] == "Town, The");  // quoted comma survives
    CHECK(cat.payload.at(2)[1] == "NV");
    std::filesystem::remove(path);
}

TEST_CASE("parse_catalog normalizes any longitude") {
    auto path = write_temp("zones_lon.csv", "id,lon,lat\n1,-122.56,10\n2,725,20\n3,360,0\n");
    auto cat = parse_catalog(path, CatalogSchema{}, 'P');
    CHECK(cat.points[0].coord.ra == doctest::Approx(237.44));
    CHECK(cat.points[1].coord.ra == doctest::Approx(5.0));
    CHECK(cat.points[2].coord.ra == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("parse_catalog errors carry the row number") {
    auto bad_lat = write_temp("zones_badlat.csv", "id,lon,lat\n1,10,20\n2,10,91\n");
    CHECK_THROWS_WITH_AS(parse_catalog(bad_lat, CatalogSchema{}, 'P'),
                         doctest::Contains("row 2"), DataError);
    std::filesystem::remove(bad_lat);

    auto bad_num = write_temp("zones_badnum.csv", "id,lon,lat\n1,abc,20\n");
    CHECK_THROWS_WITH_AS(parse_catalog(bad_num, CatalogSchema{}, 'P'),
                         doctest::Contains("row 1"), DataError);
    std::filesystem::remove(bad_num);

    auto dup = write_temp("zones_dup.csv", "id,lon,lat\n7,10,20\n7,11,21\n");
    CHECK_THROWS_WITH_AS(parse_catalog(dup, CatalogSchema{}, 'P'), doctest::Contains("duplicate"),
                         DataError);
    std::filesystem::remove(dup);

    auto missing = write_temp("zones_missing.csv", "id,lon\n1,10\n");
    CHECK_THROWS_WITH_AS(parse_catalog(missing, CatalogSchema{}, 'P'),
                         doctest::Contains("lat"), DataError);
    std::filesystem::remove(missing);
}

TEST_CASE("parsing is idempotent") {
    auto path = write_temp("zones_idem.csv", "id,lon,lat\n1,-10,5\n2,350,-5\n");
    auto a = parse_catalog(path, CatalogSchema{}, 'P');
    auto b = parse_catalog(path, CatalogSchema{}, 'P');
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].objID == b.points[i].objID);
        CHECK(a.points[i].coord.ra == b.points[i].coord.ra);
        CHECK(a.points[i].unit.x == b.points[i].unit.x);
    }
    std::filesystem::remove(path);
}

TEST_CASE("generate_synthetic basics") {
    CHECK(generate_synthetic(0, 1, Distribution::uniform_sphere, 'P').empty());

    auto a = generate_synthetic(200, 42, Distribution::uniform_sphere, 'P');
    auto b = generate_synthetic(200, 42, Distribution::uniform_sphere, 'P');
    REQUIRE(a.size() == 200);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].coord.ra == b[i].coord.ra);
        CHECK(a[i].coord.dec == b[i].coord.dec);
        CHECK(a[i].objID == static_cast<std::int64_t>(i) + 1);
    }
}

TEST_CASE("generated records satisfy the record invariants") {
    for (auto dist :
         {Distribution::uniform_sphere, Distribution::polar_cap, Distribution::meridian_strip}) {
        auto pts = generate_synthetic(500, 43, dist, 'P');
        for (const auto& p : pts) {
            CHECK(p.coord.ra >= 0.0);
            CHECK(p.coord.ra < 360.0);
            CHECK(p.coord.dec >= -90.0);
            CHECK(p.coord.dec <= 90.0);
            const auto& u = p.unit;
            CHECK(std::fabs(u.x * u.x + u.y * u.y + u.z * u.z - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("uniform sampling covers the sphere uniformly by area") {
    auto pts = generate_synthetic(100000, 44, Distribution::uniform_sphere, 'P');
    std::size_t low = 0;
    for (const auto& p : pts)
        if (std::fabs(p.coord.dec) < 30.0) ++low;
    const double frac = static_cast<double>(low) / static_cast<double>(pts.size());
    CHECK(std::fabs(frac - 0.5) < 0.01);  // area fraction sin(30) = 1/2
}

TEST_CASE("special distributions stay in their regions") {
    for (const auto& p : generate_synthetic(300, 45, Distribution::polar_cap, 'P'))
        CHECK(p.coord.dec >= 88.0);
    for (const auto& p : generate_synthetic(300, 46, Distribution::meridian_strip, 'P'))
        CHECK((p.coord.ra <= 1.0 || p.coord.ra >= 359.0));
}

TEST_CASE("distribution names parse") {
    CHECK(parse_distribution("uniform") == Distribution::uniform_sphere);
    CHECK(parse_distribution("polar-cap") == Distribution::polar_cap);
    CHECK(parse_distribution("meridian-strip") == Distribution::meridian_strip);
    CHECK_THROWS_AS(parse_distribution("bogus"), DataError);
}
