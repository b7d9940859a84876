// zones: build declination-stripe indices over point catalogs, run
// points-near-point / nearest queries and batch self- or cross-matches, and
// verify everything against serial brute-force references.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zones/errors.hpp"
#include "zones/index.hpp"
#include "zones/ingest.hpp"
#include "zones/match.hpp"
#include "zones/oracle.hpp"
#include "zones/query.hpp"

namespace {

using namespace zones;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decimal degrees, or arcminutes/arcseconds with an m/s suffix ("10m", "30s").
double parse_angle(const std::string& text) {
    std::string num = text;
    double scale = 1.0;
    if (!num.empty() && (num.back() == 'm' || num.back() == 's' || num.back() == 'd')) {
        if (num.back() == 'm') scale = 1.0 / 60.0;
        if (num.back() == 's') scale = 1.0 / 3600.0;
        num.pop_back();
    }
    double v = 0.0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), v);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size() || num.empty())
        throw UsageError("bad angle '" + text + "' (use degrees, or 10m / 30s)");
    return v * scale;
}

double units_factor(const std::string& units) {
    if (units == "deg") return 1.0;
    if (units == "nm" || units == "arcmin") return 60.0;  // 1 NM == 1 arcminute
    throw UsageError("bad --units '" + units + "' (deg, nm or arcmin)");
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// "P=value" option payloads.
std::pair<char, std::string> split_typed(const std::string& s, const char* what) {
    if (s.size() < 3 || s[1] != '=')
        throw UsageError(std::string(what) + " needs the form T=..., got '" + s + "'");
    return {s[0], s.substr(2)};
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct OutStream {
    explicit OutStream(const std::string& path) {
        if (!path.empty() && path != "-") {
            file.open(path, std::ios::binary | std::ios::trunc);
            if (!file) throw DataError("cannot open output file: " + path);
        }
    }
    std::ostream& get() { return file.is_open() ? file : std::cout; }
    std::ofstream file;
};

void write_neighbors(std::ostream& os, const std::vector<Neighbor>& rows, double factor) {
    os << "objID,distance\n";
    for (const auto& n : rows)
        os << n.objID << ',' << format_double(n.distance * factor) << '\n';
}

void write_pairs(std::ostream& os, const std::vector<MatchPair>& rows, double factor) {
    os << "objID1,objID2,distance\n";
    for (const auto& p : rows)
        os << p.objID1 << ',' << p.objID2 << ',' << format_double(p.distance * factor) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- build ----------------------------------------------------------------

struct BuildArgs {
    std::vector<std::string> catalogs;    // T=path
    std::vector<std::string> schemas;     // T=id,lon,lat[,payload...]
    std::vector<std::string> synthetics;  // T=dist:n:seed
    std::string zone_height = "10m";
    std::string theta = "1";
    std::string margin = "full";
    std::string out;
};

int cmd_build(const BuildArgs& args) {
    const double h = parse_angle(args.zone_height);
    const double theta = parse_angle(args.theta);
    if (!(h > 0.0)) throw UsageError("--zone-height must be positive");
    if (!(theta > 0.0 && theta < 90.0)) throw UsageError("--theta must be in (0, 90)");
    MarginMode mode;
    if (args.margin == "full")
        mode = MarginMode::full;
    else if (args.margin == "trimmed")
        mode = MarginMode::trimmed;
    else
        throw UsageError("--margin must be full or trimmed");
    if (args.catalogs.empty() && args.synthetics.empty())
        throw UsageError("need at least one --catalog or --synthetic");

    std::map<char, CatalogSchema> schemas;
    for (const auto& s : args.schemas) {
        auto [type, body] = split_typed(s, "--schema");
        auto cols = split_on(body, ',');
        if (cols.size() < 3) throw UsageError("--schema needs id,lon,lat column names");
        CatalogSchema schema{cols[0], cols[1], cols[2], {}};
        schema.payloadColumns.assign(cols.begin() + 3, cols.end());
        schemas[type] = schema;
    }

    std::vector<PointRecord> points;
    for (const auto& c : args.catalogs) {
        auto [type, path] = split_typed(c, "--catalog");
        auto it = schemas.find(type);
        const CatalogSchema schema = it == schemas.end() ? CatalogSchema{} : it->second;
        auto cat = parse_catalog(path, schema, type);
        points.insert(points.end(), cat.points.begin(), cat.points.end());
    }
    for (const auto& s : args.synthetics) {
        auto [type, body] = split_typed(s, "--synthetic");
        auto parts = split_on(body, ':');
        if (parts.size() != 3) throw UsageError("--synthetic needs T=dist:n:seed");
        const auto dist = parse_distribution(parts[0]);
        const auto n = static_cast<std::size_t>(std::stoull(parts[1]));
        const auto seed = static_cast<std::uint64_t>(std::stoull(parts[2]));
        auto pts = generate_synthetic(n, seed, dist, type);
        points.insert(points.end(), pts.begin(), pts.end());
    }

    auto store = build_index(points, IndexConfig(theta, h, mode));
    save_index(store, args.out);

    for (char t : store.obj_types()) {
        const auto native = store.native_count(t);
        const auto total = store.total_count(t);
        std::cout << "type " << t << ": " << native << " native, " << (total - native)
                  << " margin entries\n";
    }
    std::cout << "wrote " << args.out << " (zoneHeight " << format_double(h) << ", theta "
              << format_double(theta) << ", margins " << args.margin << ")\n";
    return kExitOk;
}

// ---- near / nearest --------------------------------------------------------

struct QueryArgs {
    std::string index;
    std::string type;
    double ra = 0.0;
    double dec = 0.0;
    std::string theta = "0.2";
    std::string units = "deg";
    std::string out;
};

char single_type(const std::string& s) {
    if (s.size() != 1) throw UsageError("--type must be a single character");
    return s[0];
}

int cmd_near(const QueryArgs& args, bool nearest) {
    const double factor = units_factor(args.units);
    auto store = load_index(args.index);
    const SphericalCoord center{normalize_ra(args.ra), args.dec};
    if (!(args.dec >= -90.0 && args.dec <= 90.0))
        throw UsageError("--dec/--lat must be in [-90, 90]");

    OutStream out(args.out);
    if (nearest) {
        std::vector<Neighbor> rows;
        if (auto hit = nearest_object(store, single_type(args.type), center)) rows.push_back(*hit);
        write_neighbors(out.get(), rows, factor);
    } else {
        const double theta = parse_angle(args.theta);
        if (!(theta > 0.0)) throw UsageError("--theta must be positive");
        auto rows = points_near_point(store, {single_type(args.type), center, theta});
        write_neighbors(out.get(), rows, factor);
    }
    return kExitOk;
}

// ---- selfmatch / crossmatch -------------------------------------------------

struct MatchArgs {
    std::string index;
    std::string index_b;
    std::string type;
    std::string type_b;
    std::string theta = "1";
    std::string units = "deg";
    std::string out;
    int workers = 0;
    bool no_symmetry = false;
};

int cmd_match(const MatchArgs& args, MatchMode mode) {
    const double factor = units_factor(args.units);
    const double theta = parse_angle(args.theta);
    if (!(theta > 0.0)) throw UsageError("--theta must be positive");

    auto store_a = load_index(args.index);
    std::optional<ZoneIndexStore> store_b;
    if (!args.index_b.empty()) store_b = load_index(args.index_b);

    MatchOptions opts;
    opts.workers = args.workers;
    opts.useSymmetry = !args.no_symmetry;

    OutStream out(args.out);
    if (mode == MatchMode::self) {
        MatchJob job{&store_a, &store_a, single_type(args.type), single_type(args.type), theta,
                     MatchMode::self};
        write_pairs(out.get(), self_match(job, opts), factor);
    } else {
        const ZoneIndexStore& b = store_b ? *store_b : store_a;
        MatchJob job{&store_a, &b, single_type(args.type), single_type(args.type_b), theta,
                     MatchMode::cross};
        write_pairs(out.get(), cross_match(job, opts), factor);
    }
    return kExitOk;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t seed = 42;
    std::size_t n = 1000;
    int workers = 0;
};

int cmd_verify(const VerifyArgs& args) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << '\n';
        if (!ok) ++failures;
    };

    const std::pair<Distribution, const char*> dists[] = {
        {Distribution::uniform_sphere, "uniform"},
        {Distribution::polar_cap, "polar-cap"},
        {Distribution::meridian_strip, "meridian-strip"},
    };

    MatchOptions opts;
    opts.workers = args.workers;

    for (const auto& [dist, name] : dists) {
        auto pts = generate_synthetic(args.n, args.seed, dist, 'A');
        auto centers = generate_synthetic(50, args.seed + 1, dist, 'C');

        for (auto mode : {MarginMode::full, MarginMode::trimmed}) {
            auto store = build_index(pts, IndexConfig(1.0, std::nullopt, mode));
            const char* mname = mode == MarginMode::full ? "full" : "trimmed";

            bool queries_ok = true;
            std::string detail;
            for (double theta : {0.01, 0.5, 1.0}) {
                for (const auto& c : centers) {
                    auto got = points_near_point(store, {'A', c.coord, theta});
                    auto want = oracle::brute_neighbors(pts, c.coord, theta);
                    queries_ok &= oracle::same_neighbors(got, want, theta, 1e-9, &detail);
                }
            }
            report(std::string("queries vs oracle      [") + name + ", " + mname + "]",
                   queries_ok, detail);

            MatchJob self{&store, &store, 'A', 'A', 1.0, MatchMode::self};
            auto got_self = self_match(self, opts);
            auto want_self = oracle::brute_match(pts, pts, 1.0, true);
            report(std::string("self-match vs oracle   [") + name + ", " + mname + "]",
                   oracle::same_pairs(got_self, want_self, 1.0, 1e-9, &detail), detail);
        }

        auto other = generate_synthetic(args.n, args.seed + 2, dist, 'B');
        std::vector<PointRecord> both(pts);
        both.insert(both.end(), other.begin(), other.end());
        auto store = build_index(both, IndexConfig(1.0));
        MatchJob cross{&store, &store, 'A', 'B', 1.0, MatchMode::cross};
        auto got_cross = cross_match(cross, opts);
        auto want_cross = oracle::brute_match(pts, other, 1.0, false);
        std::string detail;
        report(std::string("cross-match vs oracle  [") + name + "]",
               oracle::same_pairs(got_cross, want_cross, 1.0, 1e-9, &detail), detail);
    }

    // Meridian wraparound pin: the classic neighbor pair across ra = 0.
    {
        std::vector<PointRecord> two{
            {'P', 1, {359.95, 51.48}, to_unit_vector({359.95, 51.48})},
            {'P', 2, {0.02, 51.48}, to_unit_vector({0.02, 51.48})},
        };
        auto store = build_index(two, IndexConfig(10.0 / 60.0));
        auto got = points_near_point(store, {'P', {0.02, 51.48}, 10.0 / 60.0});
        report("wraparound neighbor found", got.size() == 2);
    }

    if (failures > 0) {
        std::cout << failures << " check(s) failed\n";
        return kExitCheckFailed;
    }
    std::cout << "all checks passed\n";
    return kExitOk;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
    std::size_t n = 20000;
    std::string theta = "1";
    std::uint64_t seed = 42;
    int workers = 0;
    std::string out;
};

int cmd_bench(const BenchArgs& args) {
    const double theta = parse_angle(args.theta);
    if (!(theta > 0.0 && theta < 90.0)) throw UsageError("--theta must be in (0, 90)");

    auto pts = generate_synthetic(args.n, args.seed, Distribution::uniform_sphere, 'P');

    auto t0 = std::chrono::steady_clock::now();
    auto store = build_index(pts, IndexConfig(theta));
    const double t_build = seconds_since(t0);

    MatchOptions opts;
    opts.workers = args.workers;
    MatchJob job{&store, &store, 'P', 'P', theta, MatchMode::self};
    t0 = std::chrono::steady_clock::now();
    auto batch = args.n ? self_match(job, opts) : std::vector<MatchPair>{};
    const double t_batch = seconds_since(t0);

    // Per-point loop: one query per object, self excluded, like calling a
    // nearby-objects function per row.
    t0 = std::chrono::steady_clock::now();
    std::size_t per_point_pairs = 0;
    for (const auto& p : pts) {
        auto rows = points_near_point(store, {'P', p.coord, theta});
        for (const auto& r : rows) per_point_pairs += r.objID != p.objID;
    }
    const double t_per_point = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto brute = oracle::brute_match(pts, pts, theta, true);
    const double t_brute = seconds_since(t0);

    auto ratio = [](double slow, double fast) { return fast > 0.0 ? slow / fast : 0.0; };

    OutStream out(args.out);
    out.get() << "method,n,theta,workers,seconds,pairs\n"
              << "build," << args.n << ',' << format_double(theta) << ',' << args.workers << ','
              << format_double(t_build) << ",0\n"
              << "batch," << args.n << ',' << format_double(theta) << ',' << args.workers << ','
              << format_double(t_batch) << ',' << batch.size() << '\n'
              << "per-point," << args.n << ',' << format_double(theta) << ',' << args.workers
              << ',' << format_double(t_per_point) << ',' << per_point_pairs << '\n'
              << "brute," << args.n << ',' << format_double(theta) << ',' << args.workers << ','
              << format_double(t_brute) << ',' << brute.size() << '\n';

    std::cerr << "n=" << args.n << " theta=" << format_double(theta) << "\n"
              << "  build      " << format_double(t_build) << " s\n"
              << "  batch      " << format_double(t_batch) << " s, " << batch.size() << " pairs\n"
              << "  per-point  " << format_double(t_per_point) << " s, " << per_point_pairs
              << " pairs\n"
              << "  brute      " << format_double(t_brute) << " s, " << brute.size() << " pairs\n"
              << "  speedup batch vs brute:     " << format_double(ratio(t_brute, t_batch))
              << "x\n"
              << "  speedup batch vs per-point: " << format_double(ratio(t_per_point, t_batch))
              << "x\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zone index for spherical catalogs: neighbor queries and batch matching"};
    app.require_subcommand(1);

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "build a zone index from catalogs");
    build->add_option("--catalog", build_args.catalogs, "catalog CSV as T=path (repeatable)");
    build->add_option("--schema", build_args.schemas,
                      "columns as T=id,lon,lat[,payload...] (default id,lon,lat)");
    build->add_option("--synthetic", build_args.synthetics,
                      "synthetic catalog as T=dist:n:seed (dist: uniform, polar-cap, "
                      "meridian-strip)");
    build->add_option("--zone-height", build_args.zone_height, "zone height (default 10m)");
    build->add_option("--theta", build_args.theta, "design match radius (default 1 degree)");
    build->add_option("--margin", build_args.margin, "full or trimmed (default full)");
    build->add_option("--out", build_args.out, "index file to write")->required();

    QueryArgs near_args;
    auto* near = app.add_subcommand("near", "objects within theta of a point");
    near->add_option("--index", near_args.index, "index file")->required();
    near->add_option("--type", near_args.type, "object type tag")->required();
    near->add_option("--ra,--lon", near_args.ra, "center ra/longitude (degrees)")->required();
    near->add_option("--dec,--lat", near_args.dec, "center dec/latitude (degrees)")->required();
    near->add_option("--theta", near_args.theta, "search radius (default 0.2)");
    near->add_option("--units", near_args.units, "deg, nm or arcmin (default deg)");
    near->add_option("--out", near_args.out, "output CSV (default stdout)");

    QueryArgs nearest_args;
    auto* nearest = app.add_subcommand("nearest", "closest object to a point");
    nearest->add_option("--index", nearest_args.index, "index file")->required();
    nearest->add_option("--type", nearest_args.type, "object type tag")->required();
    nearest->add_option("--ra,--lon", nearest_args.ra, "center ra/longitude (degrees)")->required();
    nearest->add_option("--dec,--lat", nearest_args.dec, "center dec/latitude (degrees)")
        ->required();
    nearest->add_option("--units", nearest_args.units, "deg, nm or arcmin (default deg)");
    nearest->add_option("--out", nearest_args.out, "output CSV (default stdout)");

    MatchArgs self_args;
    auto* selfm = app.add_subcommand("selfmatch", "match a dataset against itself");
    selfm->add_option("--index", self_args.index, "index file")->required();
    selfm->add_option("--type", self_args.type, "object type tag")->required();
    selfm->add_option("--theta", self_args.theta, "match radius (default 1 degree)");
    selfm->add_option("--units", self_args.units, "deg, nm or arcmin (default deg)");
    selfm->add_option("--workers", self_args.workers, "worker threads (0 = all)");
    selfm->add_flag("--no-symmetry", self_args.no_symmetry,
                    "evaluate every ordered pair instead of half + mirror");
    selfm->add_option("--out", self_args.out, "output CSV (default stdout)");

    MatchArgs cross_args;
    auto* crossm = app.add_subcommand("crossmatch", "match two datasets");
    crossm->add_option("--index", cross_args.index, "index file")->required();
    crossm->add_option("--index-b", cross_args.index_b,
                       "second index file (default: same index)");
    crossm->add_option("--type-a", cross_args.type, "first object type")->required();
    crossm->add_option("--type-b", cross_args.type_b, "second object type")->required();
    crossm->add_option("--theta", cross_args.theta, "match radius (default 1 degree)");
    crossm->add_option("--units", cross_args.units, "deg, nm or arcmin (default deg)");
    crossm->add_option("--workers", cross_args.workers, "worker threads (0 = all)");
    crossm->add_option("--out", cross_args.out, "output CSV (default stdout)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "engine vs brute-force oracle checks");
    verify->add_option("--seed", verify_args.seed, "fixture seed (default 42)");
    verify->add_option("--n", verify_args.n, "fixture size (default 1000)");
    verify->add_option("--workers", verify_args.workers, "worker threads (0 = all)");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "time batch match vs per-point loop vs brute force");
    bench->add_option("--n", bench_args.n, "point count (default 20000)");
    bench->add_option("--theta", bench_args.theta, "match radius (default 1 degree)");
    bench->add_option("--seed", bench_args.seed, "fixture seed (default 42)");
    bench->add_option("--workers", bench_args.workers, "worker threads (0 = all)");
    bench->add_option("--out", bench_args.out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(build_args);
        if (near->parsed()) return cmd_near(near_args, false);
        if (nearest->parsed()) return cmd_near(nearest_args, true);
        if (selfm->parsed()) return cmd_match(self_args, MatchMode::self);
        if (crossm->parsed()) return cmd_match(cross_args, MatchMode::cross);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (bench->parsed()) return cmd_bench(bench_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}
