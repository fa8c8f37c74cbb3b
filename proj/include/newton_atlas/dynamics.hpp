#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "newton_atlas/newton_map.hpp"

namespace newton_atlas {

struct DynamicsParams {
    int max_iter = 10000;
    /// Root convergence radius: conv_radius_factor * (1 + |z_i|).
    double conv_radius_factor = 1e-8;
    /// Escape radius: escape_radius_factor * (1 + max |z_i|). Only meaningful
    /// in the parabolic case (deg q >= 1); with a repelling point at infinity
    /// no orbit converges there.
    double escape_radius_factor = 1e3;
    /// Consecutive non-decreasing-modulus steps required before an escape is
    /// declared (filters orbits swinging past the repelling directions).
    int escape_monotone_steps = 8;
    bool record_orbit = false;
};

struct Orbit {
    enum class Verdict { converged_to_root, converged_to_infinity, undecided };
    Verdict verdict = Verdict::undecided;
    int target = -1;  // root index or petal index
    int iterations_used = 0;
    /// Full orbit when record_orbit is set, otherwise {z0, last}.
    std::vector<SpherePoint> points;
};

const char* to_string(Orbit::Verdict v);

/// Orbit classification per the certificate: convergence to a root z_i within
/// its radius (with a contraction check), or to infinity through a petal
/// (modulus beyond the escape radius, non-decreasing for K steps, direction
/// within pi/(2n) of a petal direction). Exact hits of infinity are returned
/// undecided: they are prepoles, which lie on the Julia set.
Orbit classify_point(const RationalMap& map, const NewtonCertificate& cert, Complex z0,
                     const DynamicsParams& params = {});

struct CriticalPoints {
    RootSet finite;             // zeros of num' den - num den' with multiplicity
    bool infinity_critical = false;
    int infinity_local_degree = 1;
};

/// Finite critical points from the (unreduced) Wronskian, so multiple poles
/// are included; the point at infinity is reported separately and never mixed
/// into the root set.
CriticalPoints critical_points(const RationalMap& map, const RatmapOptions& opts = {});

/// Axis-aligned rectangle in the plane.
struct Region {
    Complex center{0.0, 0.0};
    double width = 4.0;
    double height = 4.0;
};

/// Raster of basin verdicts over a region. Row 0 is the top of the region
/// (largest imaginary part); pixel centers are offset half a cell. Labels:
/// -1 undecided, 0..root_count-1 roots, root_count..root_count+petal_count-1
/// petals. Components partition same-label pixels 4-connectedly; undecided
/// pixels always carry component -1.
struct BasinRaster {
    Region region;
    int width = 0;
    int height = 0;
    int root_count = 0;
    int petal_count = 0;
    std::vector<int16_t> labels;
    std::vector<int32_t> components;
    std::vector<int32_t> iterations;
    int component_count = 0;

    static constexpr int16_t kUndecided = -1;

    size_t index(int ix, int iy) const { return static_cast<size_t>(iy) * width + ix; }
    Complex pixel_center(int ix, int iy) const;
    /// Pixel containing z, or nullopt when z is outside the region.
    std::optional<std::pair<int, int>> locate(Complex z) const;

    bool same_grid(const BasinRaster& o) const;
};

/// Classifies every pixel center and labels 4-connected components.
/// resolution is the pixel count per side; threads <= 0 selects the hardware
/// concurrency. Output is identical for any thread count.
BasinRaster raster_basins(const RationalMap& map, const NewtonCertificate& cert,
                          const Region& region, int resolution,
                          const DynamicsParams& params = {}, int threads = 0);

/// An immediate basin: the raster component containing a root pixel, or (for
/// the parabolic case) a far-field pixel along a petal direction. `served`
/// holds the root index, or every petal index whose sample landed in this
/// component.
struct ImmediateBasin {
    int component = -1;
    bool parabolic = false;
    std::vector<int> served;
};

std::vector<ImmediateBasin> immediate_basins(const BasinRaster& raster,
                                             const NewtonCertificate& cert);

/// Theorem-4 census: per immediate basin, the number k of critical points
/// inside (with multiplicity), the restriction degree k+1 and the access
/// count k; parabolic basins additionally carry the unique dynamical access.
struct AccessCensus {
    struct BasinEntry {
        int component = -1;
        bool parabolic = false;
        std::vector<int> served;
        int critical_points = 0;
        int restriction_degree = 1;
        int access_count = 0;
        bool dynamical_access = false;
    };
    /// Critical points that belong to no basin (orbit undecided: Julia set
    /// proxy) or that fell in a non-immediate component.
    struct UnassignedCritical {
        Complex z;
        int multiplicity = 1;
        std::string reason;
    };
    std::vector<BasinEntry> basins;
    std::vector<UnassignedCritical> unassigned;
};

/// Counts critical points per immediate basin. A critical point whose own
/// orbit is undecided is reported unassigned (it lies on the Julia-set proxy
/// and belongs to no basin). A critical point whose orbit converges is
/// accepted only when its pixel label matches the verdict and the surrounding
/// 2-pixel neighborhood lies in a single component; otherwise the census
/// refuses with CriticalPointUnresolved rather than guessing.
AccessCensus access_census(const RationalMap& map, const NewtonCertificate& cert,
                           const BasinRaster& raster, const std::vector<ImmediateBasin>& immediate,
                           const CriticalPoints& crit, const DynamicsParams& params = {});

struct TraceParams {
    int samples = 33;        // points on the seed segment eta, endpoints included
    int generations = 1024;  // forward images appended after eta
    double angular_tol = 1e-2;
    /// Check the landing direction against the petal direction once the trace
    /// is far enough out; throws TraceLandingMismatch on failure.
    bool enforce_landing = true;
};

/// The dynamical access curve Gamma = union of N^g(eta) for the segment
/// eta = [z0, N(z0)] inside a parabolic immediate basin.
struct AccessTrace {
    std::vector<Complex> polyline;                  // generations concatenated
    std::vector<std::pair<int, int>> generations;   // [begin, end) ranges
    Complex landing_direction{0.0, 0.0};            // unit vector
    double angular_error = 0.0;                     // vs the petal direction
    int petal = -1;
    /// Index past which |polyline| is non-decreasing to the end.
    int monotone_from = 0;
};

/// Traces the dynamical access from z0 toward infinity through the given
/// petal. Throws SeedNotInParabolicBasin when z0 does not converge to that
/// petal, SegmentLeavesBasin when a sample of eta classifies elsewhere.
AccessTrace trace_dynamical_access(const RationalMap& map, const NewtonCertificate& cert,
                                   Complex z0, int petal, const DynamicsParams& params = {},
                                   const TraceParams& trace = {});

}  // namespace newton_atlas
