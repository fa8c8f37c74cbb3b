#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "newton_atlas/dynamics.hpp"
#include "newton_atlas/newton_map.hpp"

namespace newton_atlas {

using Json = nlohmann::ordered_json;

// wire formats -------------------------------------------------------------

/// Polynomial <-> list of [re, im] pairs, ascending degree.
Json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const Json& j, const std::string& what);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& what);

/// {"num": [...], "den": [...]}
Json map_to_json(const RationalMap& m);

/// {"roots": [{"z": [re, im], "m": int}], "q": [...], "k": int, "n": int, "degree": int}
Json certificate_to_json(const NewtonCertificate& c);
NewtonCertificate certificate_from_json(const Json& j);

Json not_newton_to_json(const NotNewton& r);
Json pole_diagnostics_to_json(const std::vector<PoleDiagnostic>& poles);
Json fixed_points_to_json(const std::vector<FixedPointRecord>& fps);
Json multiplier_report_to_json(const MultiplierReport& rep);
Json infinity_to_json(const InfinityClassification& cls, const std::vector<Complex>& petals);
Json critical_points_to_json(const CriticalPoints& crit);
Json census_to_json(const AccessCensus& census);
Json trace_to_json(const AccessTrace& trace);
Json region_to_json(const Region& region);
Json params_to_json(const DynamicsParams& params, const NewtonOptions& opts);

// map spec ------------------------------------------------------------------

/// Parsed input document. Exactly one of `rational` / `newton` is present.
struct MapSpec {
    struct RationalInput {
        Polynomial num, den;
    };
    struct NewtonInput {
        std::vector<NewtonCertificate::Root> roots;
        Polynomial q;
    };
    std::optional<RationalInput> rational;
    std::optional<NewtonInput> newton;
    std::optional<Region> region;
    std::optional<int> resolution;
    DynamicsParams params;
    NewtonOptions newton_opts;
    TraceParams trace;
};

/// Validates and parses a spec document; throws MalformedSpec with a schema
/// diagnostic on any violation.
MapSpec parse_map_spec(const Json& doc);
MapSpec load_map_spec(const std::string& path);

/// Default raster region for a certificate: centered at 0, side length 4x the
/// root spread (at least 4).
Region default_region(const NewtonCertificate& cert);

}  // namespace newton_atlas
