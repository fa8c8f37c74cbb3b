// newton-atlas: decide whether a rational map is a Newton map of p*e^q,
// reconstruct (p, q), classify fixed points, raster basins of attraction and
// trace invariant accesses to infinity.

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "newton_atlas/dynamics.hpp"
#include "newton_atlas/errors.hpp"
#include "newton_atlas/io_util.hpp"
#include "newton_atlas/json_io.hpp"
#include "newton_atlas/newton_map.hpp"
#include "newton_atlas/raster_io.hpp"
#include "newton_atlas/render.hpp"

namespace na = newton_atlas;

namespace {

// exit codes are a stable contract
constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kMalformed = 2;
constexpr int kNotNewton = 3;
constexpr int kCensusRefused = 4;
constexpr int kBadSeed = 5;

struct CommonArgs {
    std::string spec_path;
    std::string out_dir;
    int resolution = 0;  // 0: spec value or default 512
    int max_iter = 0;    // 0: spec value or module default
    double tol = 0.0;    // 0: spec value or module default
    int threads = 0;     // 0: env var or hardware
};

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("NEWTON_ATLAS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // let the raster pick hardware concurrency
}

void apply_overrides(na::MapSpec& spec, const CommonArgs& args) {
    if (args.resolution > 0) spec.resolution = args.resolution;
    if (args.max_iter > 0) spec.params.max_iter = args.max_iter;
    if (args.tol > 0.0) spec.newton_opts.integer_tol = args.tol;
}

struct ResolvedMap {
    na::RationalMap map;
    na::NewtonCertificate cert;
    std::vector<na::PoleDiagnostic> poles;
};

// Builds the map and its certificate from either spec form. Throws NotNewton
// information by returning nullopt along with the filled-in detect result.
std::optional<ResolvedMap> resolve(const na::MapSpec& spec, na::DetectResult* rejection_out) {
    if (spec.newton) {
        auto built = na::construct(spec.newton->roots, spec.newton->q, spec.newton_opts);
        return ResolvedMap{std::move(built.map), std::move(built.certificate), {}};
    }
    na::RationalMap map =
        na::RationalMap::normalized(spec.rational->num, spec.rational->den, spec.newton_opts.ratmap);
    na::DetectResult det = na::detect(map, spec.newton_opts);
    if (!det.is_newton()) {
        if (rejection_out) *rejection_out = std::move(det);
        return std::nullopt;
    }
    return ResolvedMap{std::move(map), std::move(*det.certificate), std::move(det.poles)};
}

void emit(const na::Json& j) { std::cout << j.dump(2) << "\n"; }

void write_json(const std::string& path, const na::Json& j) {
    na::write_file_atomic(path, j.dump(2) + "\n");
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::path dir = args.out_dir.empty() ? "." : args.out_dir;
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

int cmd_detect(const CommonArgs& args) {
    na::MapSpec spec = na::load_map_spec(args.spec_path);
    apply_overrides(spec, args);
    if (!spec.rational) throw na::MalformedSpec("detect: spec must provide a \"rational\" map");

    na::RationalMap map =
        na::RationalMap::normalized(spec.rational->num, spec.rational->den, spec.newton_opts.ratmap);
    na::DetectResult det = na::detect(map, spec.newton_opts);

    na::Json report;
    report["newton"] = det.is_newton();
    if (det.is_newton()) report["certificate"] = na::certificate_to_json(*det.certificate);
    if (det.rejection) report["reason"] = na::not_newton_to_json(*det.rejection);
    report["poles"] = na::pole_diagnostics_to_json(det.poles);
    report["map"] = na::map_to_json(map);
    report["params"] = na::params_to_json(spec.params, spec.newton_opts);
    emit(report);
    if (!args.out_dir.empty()) write_json(out_path(args, "detect.json"), report);
    return det.is_newton() ? kOk : kNotNewton;
}

int cmd_analyze(const CommonArgs& args) {
    na::MapSpec spec = na::load_map_spec(args.spec_path);
    apply_overrides(spec, args);

    na::DetectResult rejection;
    auto resolved = resolve(spec, &rejection);
    if (!resolved) {
        na::Json report{{"newton", false},
                        {"reason", na::not_newton_to_json(*rejection.rejection)},
                        {"poles", na::pole_diagnostics_to_json(rejection.poles)}};
        emit(report);
        return kNotNewton;
    }

    const na::RationalMap& map = resolved->map;
    const na::NewtonCertificate& cert = resolved->cert;
    auto fps = na::fixed_points(map, spec.newton_opts.ratmap);
    auto mult = na::validate_multipliers(map, cert, spec.newton_opts.integer_tol);
    auto inf = na::classify_infinity(cert);
    std::vector<na::Complex> petals;
    if (inf.kind == na::InfinityKind::parabolic) petals = na::petal_directions(cert);
    auto crit = na::critical_points(map, spec.newton_opts.ratmap);

    na::Json report;
    report["map"] = na::map_to_json(map);
    report["degree"] = map.degree();
    report["cancelled_degree"] = map.cancelled_degree();
    report["certificate"] = na::certificate_to_json(cert);
    report["fixed_points"] = na::fixed_points_to_json(fps);
    report["multiplier_check"] = na::multiplier_report_to_json(mult);
    report["infinity"] = na::infinity_to_json(inf, petals);
    report["critical_points"] = na::critical_points_to_json(crit);
    report["params"] = na::params_to_json(spec.params, spec.newton_opts);
    emit(report);
    if (!args.out_dir.empty()) write_json(out_path(args, "analyze.json"), report);
    return kOk;
}

int cmd_basins(const CommonArgs& args) {
    na::MapSpec spec = na::load_map_spec(args.spec_path);
    apply_overrides(spec, args);

    na::DetectResult rejection;
    auto resolved = resolve(spec, &rejection);
    if (!resolved) {
        emit(na::Json{{"newton", false}, {"reason", na::not_newton_to_json(*rejection.rejection)}});
        return kNotNewton;
    }

    na::Region region = spec.region ? *spec.region : na::default_region(resolved->cert);
    int resolution = spec.resolution ? *spec.resolution : 512;
    int threads = resolve_threads(args.threads);

    na::BasinRaster raster =
        na::raster_basins(resolved->map, resolved->cert, region, resolution, spec.params, threads);
    auto immediate = na::immediate_basins(raster, resolved->cert);
    auto crit = na::critical_points(resolved->map, spec.newton_opts.ratmap);
    auto census =
        na::access_census(resolved->map, resolved->cert, raster, immediate, crit, spec.params);

    na::write_raster(raster, out_path(args, "basins.nbas"));
    na::ColorScheme scheme = na::ColorScheme::default_for(raster.root_count, raster.petal_count);
    na::Image img = na::colorize(raster, scheme);
    std::vector<na::Complex> crit_locs;
    for (const auto& e : crit.finite.entries) crit_locs.push_back(e.root);
    img = na::overlay_points(std::move(img), raster, crit_locs, {{0, 0, 0}, 3});
    na::write_ppm(img, out_path(args, "basins.ppm"));

    na::Json report;
    report["census"] = na::census_to_json(census);
    report["certificate"] = na::certificate_to_json(resolved->cert);
    report["critical_points"] = na::critical_points_to_json(crit);
    report["region"] = na::region_to_json(region);
    report["resolution"] = resolution;
    report["params"] = na::params_to_json(spec.params, spec.newton_opts);
    write_json(out_path(args, "census.json"), report);
    emit(report);
    return kOk;
}

int cmd_trace_access(const CommonArgs& args, double seed_re, double seed_im, int petal_flag) {
    na::MapSpec spec = na::load_map_spec(args.spec_path);
    apply_overrides(spec, args);

    na::DetectResult rejection;
    auto resolved = resolve(spec, &rejection);
    if (!resolved) {
        emit(na::Json{{"newton", false}, {"reason", na::not_newton_to_json(*rejection.rejection)}});
        return kNotNewton;
    }
    if (resolved->cert.n < 1)
        throw na::NotParabolic("trace-access: the point at infinity is repelling (deg q = 0)");

    na::Complex seed(seed_re, seed_im);
    int petal = petal_flag;
    if (petal < 0) {
        na::Orbit probe = na::classify_point(resolved->map, resolved->cert, seed, spec.params);
        if (probe.verdict != na::Orbit::Verdict::converged_to_infinity)
            throw na::SeedNotInParabolicBasin(
                "trace-access: seed does not converge to the parabolic point at infinity");
        petal = probe.target;
    }

    na::AccessTrace trace = na::trace_dynamical_access(resolved->map, resolved->cert, seed, petal,
                                                       spec.params, spec.trace);

    na::Json report = na::trace_to_json(trace);
    report["params"] = na::params_to_json(spec.params, spec.newton_opts);
    write_json(out_path(args, "trace.json"), report);

    na::Region region = spec.region ? *spec.region : na::default_region(resolved->cert);
    int resolution = spec.resolution ? *spec.resolution : 512;
    na::BasinRaster raster = na::raster_basins(resolved->map, resolved->cert, region, resolution,
                                               spec.params, resolve_threads(args.threads));
    na::ColorScheme scheme = na::ColorScheme::default_for(raster.root_count, raster.petal_count);
    na::Image img = na::colorize(raster, scheme);
    img = na::overlay_polyline(std::move(img), raster, trace.polyline, {{255, 255, 255}, 1});
    img = na::overlay_points(std::move(img), raster, std::vector<na::Complex>{seed}, {{0, 0, 0}, 3});
    na::write_ppm(img, out_path(args, "trace.ppm"));

    na::Json summary{{"petal", trace.petal},
                     {"landing_direction", na::complex_to_json(trace.landing_direction)},
                     {"angular_error", trace.angular_error},
                     {"polyline_points", static_cast<int>(trace.polyline.size())}};
    emit(summary);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton map analysis on the Riemann sphere"};
    app.require_subcommand(1);

    CommonArgs args;
    double seed_re = 0.0, seed_im = 0.0;
    int petal = -1;

    auto add_common = [&](CLI::App* cmd, bool need_out) {
        cmd->add_option("--spec", args.spec_path, "map spec JSON file")->required();
        auto* out = cmd->add_option("--out", args.out_dir, "output directory");
        if (need_out) out->required();
        cmd->add_option("--resolution", args.resolution, "raster pixels per side");
        cmd->add_option("--max-iter", args.max_iter, "iteration cap per orbit");
        cmd->add_option("--tol", args.tol, "integer-residue tolerance for detection");
        cmd->add_option("--threads", args.threads,
                        "raster worker threads (default: NEWTON_ATLAS_THREADS or hardware)");
    };

    CLI::App* detect = app.add_subcommand("detect", "Theorem-3 Newton map test");
    add_common(detect, false);
    CLI::App* analyze =
        app.add_subcommand("analyze", "fixed points, multipliers, infinity class, critical points");
    add_common(analyze, false);
    CLI::App* basins = app.add_subcommand("basins", "raster basins, census and image");
    add_common(basins, true);
    CLI::App* trace = app.add_subcommand("trace-access", "trace the dynamical access to infinity");
    add_common(trace, true);
    trace->add_option("--seed-re", seed_re, "seed real part")->required();
    trace->add_option("--seed-im", seed_im, "seed imaginary part");
    trace->add_option("--petal", petal, "petal index (default: classify the seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kMalformed;
    }

    try {
        if (detect->parsed()) return cmd_detect(args);
        if (analyze->parsed()) return cmd_analyze(args);
        if (basins->parsed()) return cmd_basins(args);
        if (trace->parsed()) return cmd_trace_access(args, seed_re, seed_im, petal);
        return kMalformed;
    } catch (const na::MalformedSpec& e) {
        std::cerr << "error (malformed input): " << e.what() << "\n";
        return kMalformed;
    } catch (const na::CriticalPointUnresolved& e) {
        std::cerr << "error (census refused): " << e.what()
                  << "\nadvice: raise --resolution or enlarge the region\n";
        return kCensusRefused;
    } catch (const na::SeedNotInParabolicBasin& e) {
        std::cerr << "error (bad seed): " << e.what() << "\n";
        return kBadSeed;
    } catch (const na::SegmentLeavesBasin& e) {
        std::cerr << "error (bad seed): " << e.what() << "\n";
        return kBadSeed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (malformed input): " << e.what() << "\n";
        return kMalformed;
    } catch (const na::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    }
}
