#include "newton_atlas/json_io.hpp"

#include <cmath>
#include <fstream>

#include "newton_atlas/errors.hpp"

namespace newton_atlas {

namespace {

double finite_number(const Json& j, const std::string& what) {
    if (!j.is_number()) throw MalformedSpec(what + ": expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) throw MalformedSpec(what + ": number must be finite");
    return v;
}

int positive_int(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw MalformedSpec(what + ": expected an integer");
    int v = j.get<int>();
    if (v < 1) throw MalformedSpec(what + ": must be >= 1");
    return v;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2)
        throw MalformedSpec(what + ": expected [re, im]");
    return {finite_number(j[0], what + "[0]"), finite_number(j[1], what + "[1]")};
}

Json poly_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (Complex c : p.coeffs()) arr.push_back(complex_to_json(c));
    return arr;
}

Polynomial poly_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw MalformedSpec(what + ": expected a coefficient array");
    std::vector<Complex> coeffs;
    for (size_t i = 0; i < j.size(); ++i)
        coeffs.push_back(complex_from_json(j[i], what + "[" + std::to_string(i) + "]"));
    return Polynomial(std::move(coeffs));
}

Json map_to_json(const RationalMap& m) {
    return Json{{"num", poly_to_json(m.num())}, {"den", poly_to_json(m.den())}};
}

Json certificate_to_json(const NewtonCertificate& c) {
    Json roots = Json::array();
    for (const auto& r : c.roots) roots.push_back(Json{{"z", complex_to_json(r.z)}, {"m", r.m}});
    return Json{{"roots", std::move(roots)},
                {"q", poly_to_json(c.q)},
                {"k", c.k},
                {"n", c.n},
                {"degree", c.degree}};
}

NewtonCertificate certificate_from_json(const Json& j) {
    NewtonCertificate c;
    if (!j.is_object() || !j.contains("roots") || !j.contains("q"))
        throw MalformedSpec("certificate: expected object with roots and q");
    for (const auto& r : j.at("roots"))
        c.roots.push_back({complex_from_json(r.at("z"), "certificate root"),
                           positive_int(r.at("m"), "certificate multiplicity")});
    c.q = poly_from_json(j.at("q"), "certificate q");
    c.k = static_cast<int>(c.roots.size());
    c.n = std::max(c.q.degree(), 0);
    c.degree = c.k + c.n;
    return c;
}

Json not_newton_to_json(const NotNewton& r) {
    Json j{{"kind", to_string(r.kind)}};
    if (r.location) j["z"] = complex_to_json(*r.location);
    if (r.residue) j["residue"] = complex_to_json(*r.residue);
    if (r.kind == RejectionKind::HigherOrderPole) j["order"] = r.pole_order;
    j["near_miss"] = r.near_miss;
    j["message"] = r.describe();
    return j;
}

Json pole_diagnostics_to_json(const std::vector<PoleDiagnostic>& poles) {
    Json arr = Json::array();
    for (const auto& p : poles) {
        Json j{{"z", complex_to_json(p.location)},
               {"order", p.order},
               {"residue", complex_to_json(p.residue)},
               {"accepted", p.accepted}};
        if (p.accepted) j["m"] = p.snapped_m;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json fixed_points_to_json(const std::vector<FixedPointRecord>& fps) {
    Json arr = Json::array();
    for (const auto& f : fps) {
        Json j;
        if (f.location.is_infinity())
            j["infinity"] = true;
        else
            j["z"] = complex_to_json(f.location.value());
        if (f.multiplier) j["multiplier"] = complex_to_json(*f.multiplier);
        j["multiplicity"] = f.fixed_multiplicity;
        j["classification"] = to_string(f.classification);
        arr.push_back(std::move(j));
    }
    return arr;
}

Json multiplier_report_to_json(const MultiplierReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries)
        entries.push_back(Json{{"z", complex_to_json(e.z)},
                               {"m", e.m},
                               {"multiplier", complex_to_json(e.multiplier)},
                               {"deviation", e.deviation}});
    Json j{{"ok", rep.ok}, {"tol", rep.tol}, {"worst_deviation", rep.worst}};
    if (rep.worst_point) j["worst_point"] = complex_to_json(*rep.worst_point);
    j["entries"] = std::move(entries);
    return j;
}

Json infinity_to_json(const InfinityClassification& cls, const std::vector<Complex>& petals) {
    Json j;
    if (cls.kind == InfinityKind::repelling) {
        j["kind"] = "repelling";
        j["multiplier"] = cls.multiplier;
    } else {
        j["kind"] = "parabolic";
        j["multiplier"] = 1.0;
        j["multiplicity"] = cls.parabolic_multiplicity;
        j["petal_count"] = cls.petal_count;
        Json dirs = Json::array();
        for (Complex v : petals) dirs.push_back(complex_to_json(v));
        j["petal_directions"] = std::move(dirs);
    }
    return j;
}

Json critical_points_to_json(const CriticalPoints& crit) {
    Json finite = Json::array();
    for (const auto& e : crit.finite.entries)
        finite.push_back(Json{{"z", complex_to_json(e.root)}, {"multiplicity", e.multiplicity}});
    return Json{{"finite", std::move(finite)},
                {"residual_bound", crit.finite.residual_bound},
                {"infinity_critical", crit.infinity_critical},
                {"infinity_local_degree", crit.infinity_local_degree}};
}

Json census_to_json(const AccessCensus& census) {
    Json basins = Json::array();
    for (const auto& b : census.basins) {
        Json serves;
        if (b.parabolic)
            serves = Json{{"kind", "petal"}, {"indices", b.served}};
        else
            serves = Json{{"kind", "root"}, {"index", b.served.front()}};
        basins.push_back(Json{{"component", b.component},
                              {"serves", std::move(serves)},
                              {"critical_points", b.critical_points},
                              {"restriction_degree", b.restriction_degree},
                              {"access_count", b.access_count},
                              {"dynamical_access", b.dynamical_access}});
    }
    Json unassigned = Json::array();
    for (const auto& u : census.unassigned)
        unassigned.push_back(Json{{"z", complex_to_json(u.z)},
                                  {"multiplicity", u.multiplicity},
                                  {"reason", u.reason}});
    return Json{{"immediate_basins", std::move(basins)}, {"unassigned_critical_points", std::move(unassigned)}};
}

Json trace_to_json(const AccessTrace& trace) {
    Json generations = Json::array();
    for (auto [b, e] : trace.generations) generations.push_back(Json::array({b, e}));
    Json polyline = Json::array();
    for (Complex z : trace.polyline) polyline.push_back(complex_to_json(z));
    return Json{{"petal", trace.petal},
                {"landing_direction", complex_to_json(trace.landing_direction)},
                {"angular_error", trace.angular_error},
                {"monotone_from", trace.monotone_from},
                {"generations", std::move(generations)},
                {"polyline", std::move(polyline)}};
}

Json region_to_json(const Region& region) {
    return Json{{"center", complex_to_json(region.center)},
                {"width", region.width},
                {"height", region.height}};
}

Json params_to_json(const DynamicsParams& params, const NewtonOptions& opts) {
    return Json{{"max_iter", params.max_iter},
                {"conv_radius_factor", params.conv_radius_factor},
                {"escape_radius_factor", params.escape_radius_factor},
                {"escape_monotone_steps", params.escape_monotone_steps},
                {"detect_tol", opts.integer_tol},
                {"coprime_tol", opts.ratmap.coprime_tol},
                {"pole_cluster_radius", opts.ratmap.pole_cluster_radius}};
}

namespace {

Region region_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("center") || !j.contains("width") || !j.contains("height"))
        throw MalformedSpec("region: expected {center, width, height}");
    Region r;
    r.center = complex_from_json(j.at("center"), "region.center");
    r.width = finite_number(j.at("width"), "region.width");
    r.height = finite_number(j.at("height"), "region.height");
    if (r.width <= 0.0 || r.height <= 0.0)
        throw MalformedSpec("region: width and height must be positive");
    return r;
}

void params_from_json(const Json& j, MapSpec& spec) {
    if (!j.is_object()) throw MalformedSpec("params: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const Json& v = it.value();
        if (key == "max_iter")
            spec.params.max_iter = positive_int(v, "params.max_iter");
        else if (key == "conv_radius_factor")
            spec.params.conv_radius_factor = finite_number(v, "params.conv_radius_factor");
        else if (key == "escape_radius_factor")
            spec.params.escape_radius_factor = finite_number(v, "params.escape_radius_factor");
        else if (key == "escape_monotone_steps")
            spec.params.escape_monotone_steps = positive_int(v, "params.escape_monotone_steps");
        else if (key == "detect_tol")
            spec.newton_opts.integer_tol = finite_number(v, "params.detect_tol");
        else if (key == "coprime_tol")
            spec.newton_opts.ratmap.coprime_tol = finite_number(v, "params.coprime_tol");
        else if (key == "pole_cluster_radius")
            spec.newton_opts.ratmap.pole_cluster_radius =
                finite_number(v, "params.pole_cluster_radius");
        else if (key == "trace_samples")
            spec.trace.samples = positive_int(v, "params.trace_samples");
        else if (key == "trace_generations")
            spec.trace.generations = positive_int(v, "params.trace_generations");
        else if (key == "angular_tol")
            spec.trace.angular_tol = finite_number(v, "params.angular_tol");
        else
            throw MalformedSpec("params: unknown key \"" + key + "\"");
    }
}

}  // namespace

MapSpec parse_map_spec(const Json& doc) {
    if (!doc.is_object()) throw MalformedSpec("spec: expected a JSON object");
    MapSpec spec;
    bool has_rational = doc.contains("rational");
    bool has_newton = doc.contains("newton");
    if (has_rational == has_newton)
        throw MalformedSpec("spec: exactly one of \"rational\" / \"newton\" must be present");

    if (has_rational) {
        const Json& r = doc.at("rational");
        if (!r.is_object() || !r.contains("num") || !r.contains("den"))
            throw MalformedSpec("spec.rational: expected {num, den} coefficient lists");
        MapSpec::RationalInput in;
        in.num = poly_from_json(r.at("num"), "rational.num");
        in.den = poly_from_json(r.at("den"), "rational.den");
        if (in.den.is_zero()) throw MalformedSpec("spec.rational: den must be nonzero");
        spec.rational = std::move(in);
    } else {
        const Json& w = doc.at("newton");
        if (!w.is_object() || !w.contains("roots") || !w.contains("q"))
            throw MalformedSpec("spec.newton: expected {roots, q}");
        if (!w.at("roots").is_array()) throw MalformedSpec("spec.newton.roots: expected an array");
        MapSpec::NewtonInput in;
        for (const auto& r : w.at("roots")) {
            if (!r.is_object() || !r.contains("z") || !r.contains("m"))
                throw MalformedSpec("spec.newton.roots: entries must be {z: [re,im], m: int}");
            in.roots.push_back({complex_from_json(r.at("z"), "newton root"),
                                positive_int(r.at("m"), "newton root multiplicity")});
        }
        in.q = poly_from_json(w.at("q"), "newton.q");
        spec.newton = std::move(in);
    }

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key == "rational" || key == "newton") continue;
        if (key == "region")
            spec.region = region_from_json(it.value());
        else if (key == "resolution")
            spec.resolution = positive_int(it.value(), "resolution");
        else if (key == "params")
            params_from_json(it.value(), spec);
        else
            throw MalformedSpec("spec: unknown key \"" + key + "\"");
    }
    return spec;
}

MapSpec load_map_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedSpec("cannot open spec file: " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedSpec(std::string("spec file is not valid JSON: ") + e.what());
    }
    return parse_map_spec(doc);
}

Region default_region(const NewtonCertificate& cert) {
    double spread = 0.0;
    for (size_t i = 0; i < cert.roots.size(); ++i)
        for (size_t j = i + 1; j < cert.roots.size(); ++j)
            spread = std::max(spread, std::abs(cert.roots[i].z - cert.roots[j].z));
    spread = std::max(spread, 1.0);
    Region r;
    r.center = Complex(0.0, 0.0);
    r.width = r.height = 4.0 * spread;
    return r;
}

}  // namespace newton_atlas
