#include "newton_atlas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

#include "newton_atlas/errors.hpp"

namespace newton_atlas {

namespace {

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

// Shared per-map state for orbit classification.
struct OrbitClassifier {
    const RationalMap& map;
    std::vector<Complex> root_locs;
    std::vector<double> conv_radius2;
    std::vector<Complex> petals;
    double escape_radius = 0.0;
    int monotone_needed = 8;
    double half_window = 0.0;  // pi/(2n)
    int max_iter = 10000;
    double den_scale = 0.0;
    int den_deg = 0;

    // a jump this large relative to |z| triggers the prepole noise test
    static constexpr double kJumpGuard = 1e10;
    // coefficient-noise floor: |den(z)| below this is indistinguishable from
    // an exact pole of a nearby map
    static constexpr double kPoleEps = 1e-13;

    OrbitClassifier(const RationalMap& m, const NewtonCertificate& cert,
                    const DynamicsParams& params)
        : map(m) {
        for (const auto& r : cert.roots) {
            root_locs.push_back(r.z);
            double rad = params.conv_radius_factor * (1.0 + std::abs(r.z));
            conv_radius2.push_back(rad * rad);
        }
        if (cert.n >= 1) {
            petals = petal_directions(cert);
            half_window = M_PI / (2.0 * cert.n);
        }
        escape_radius = params.escape_radius_factor * (1.0 + cert.max_root_modulus());
        monotone_needed = params.escape_monotone_steps;
        max_iter = params.max_iter;
        den_scale = map.den().max_coeff();
        den_deg = std::max(map.den().degree(), 0);
    }

    bool is_numerical_pole(Complex z, double dv_abs) const {
        double noise = kPoleEps * den_scale * std::pow(std::max(1.0, std::abs(z)), den_deg);
        return dv_abs <= noise;
    }

    int nearest_petal(Complex z) const {
        double za = std::arg(z);
        int best = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < petals.size(); ++j) {
            double d = std::abs(wrap_angle(za - std::arg(petals[j])));
            if (d < bestd) {
                bestd = d;
                best = static_cast<int>(j);
            }
        }
        return best;
    }

    double petal_angle_error(Complex z, int petal) const {
        return std::abs(wrap_angle(std::arg(z) - std::arg(petals[petal])));
    }

    Orbit classify(Complex z0, bool record) const {
        Orbit orbit;
        Complex z = z0;
        if (record) orbit.points.push_back(SpherePoint(z));
        int monotone = 0;
        double prev_mod = std::abs(z);
        const Polynomial& nm = map.num();
        const Polynomial& dn = map.den();
        for (int iter = 0; iter < max_iter; ++iter) {
            // convergence to a finite root
            for (size_t i = 0; i < root_locs.size(); ++i) {
                Complex d = z - root_locs[i];
                double d2 = d.real() * d.real() + d.imag() * d.imag();
                if (d2 <= conv_radius2[i]) {
                    SpherePoint w = map.eval_sphere(SpherePoint(z));
                    if (!w.is_infinity() && std::abs(w.value() - root_locs[i]) * std::abs(w.value() - root_locs[i]) <= d2) {
                        orbit.verdict = Orbit::Verdict::converged_to_root;
                        orbit.target = static_cast<int>(i);
                        orbit.iterations_used = iter;
                        if (record)
                            orbit.points.push_back(w);
                        else
                            orbit.points = {SpherePoint(z0), SpherePoint(z)};
                        return orbit;
                    }
                }
            }
            // escape through a parabolic petal
            if (!petals.empty() && monotone >= monotone_needed && prev_mod > escape_radius) {
                int p = nearest_petal(z);
                if (petal_angle_error(z, p) <= half_window) {
                    orbit.verdict = Orbit::Verdict::converged_to_infinity;
                    orbit.target = p;
                    orbit.iterations_used = iter;
                    if (!record) orbit.points = {SpherePoint(z0), SpherePoint(z)};
                    return orbit;
                }
            }
            Complex nv = nm(z);
            Complex dv = dn(z);
            bool pole_hit = dv == Complex(0.0);
            Complex w(0.0);
            double wm = 0.0;
            if (!pole_hit) {
                w = nv / dv;
                pole_hit = !std::isfinite(w.real()) || !std::isfinite(w.imag());
            }
            if (!pole_hit) {
                wm = std::abs(w);
                // enormous jumps: decide between a genuine near-pole pass and
                // a prepole blurred by coefficient noise
                if (wm > kJumpGuard * (1.0 + prev_mod) && is_numerical_pole(z, std::abs(dv)))
                    pole_hit = true;
            }
            if (pole_hit) {
                // the tail sits at infinity, which lies on the Julia set, so
                // the start is no interior basin point
                orbit.iterations_used = iter + 1;
                if (record)
                    orbit.points.push_back(SpherePoint::infinity());
                else
                    orbit.points = {SpherePoint(z0), SpherePoint::infinity()};
                return orbit;
            }
            if (wm >= prev_mod)
                ++monotone;
            else
                monotone = 0;
            prev_mod = wm;
            z = w;
            if (record) orbit.points.push_back(SpherePoint(z));
        }
        orbit.iterations_used = max_iter;
        if (!record) orbit.points = {SpherePoint(z0), SpherePoint(z)};
        return orbit;
    }
};

}  // namespace

const char* to_string(Orbit::Verdict v) {
    switch (v) {
        case Orbit::Verdict::converged_to_root: return "converged_to_root";
        case Orbit::Verdict::converged_to_infinity: return "converged_to_infinity";
        case Orbit::Verdict::undecided: return "undecided";
    }
    return "?";
}

Orbit classify_point(const RationalMap& map, const NewtonCertificate& cert, Complex z0,
                     const DynamicsParams& params) {
    OrbitClassifier cls(map, cert, params);
    return cls.classify(z0, params.record_orbit);
}

CriticalPoints critical_points(const RationalMap& map, const RatmapOptions& opts) {
    CriticalPoints out;
    Polynomial w = map.wronskian().trimmed(opts.trim_rel_tol);
    if (w.degree() >= 1) {
        RootOptions ro;
        ro.cluster_radius = opts.pole_cluster_radius;
        out.finite = roots(w, ro);
    } else {
        out.finite.entries.clear();
    }

    int dn = map.num().degree(), dd = map.den().degree();
    if (dn > dd) {
        out.infinity_local_degree = dn - dd;
    } else if (dd > dn) {
        out.infinity_local_degree = dd - dn;
    } else {
        Complex c = map.num().leading() / map.den().leading();
        Polynomial diff = (map.num() - c * map.den()).trimmed(opts.trim_rel_tol);
        out.infinity_local_degree = diff.is_zero() ? 1 : dd - diff.degree();
    }
    out.infinity_critical = out.infinity_local_degree >= 2;
    return out;
}

Complex BasinRaster::pixel_center(int ix, int iy) const {
    double x = region.center.real() - 0.5 * region.width + (ix + 0.5) * region.width / width;
    double y = region.center.imag() + 0.5 * region.height - (iy + 0.5) * region.height / height;
    return {x, y};
}

std::optional<std::pair<int, int>> BasinRaster::locate(Complex z) const {
    double fx = (z.real() - region.center.real() + 0.5 * region.width) / region.width * width;
    double fy = (region.center.imag() + 0.5 * region.height - z.imag()) / region.height * height;
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    if (ix < 0 || iy < 0 || ix >= width || iy >= height) return std::nullopt;
    return std::make_pair(ix, iy);
}

bool BasinRaster::same_grid(const BasinRaster& o) const {
    return width == o.width && height == o.height && region.center == o.region.center &&
           region.width == o.region.width && region.height == o.region.height;
}

namespace {

void label_components(BasinRaster& r) {
    const int w = r.width, h = r.height;
    r.components.assign(static_cast<size_t>(w) * h, -1);
    int next = 0;
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t idx = r.index(x, y);
            if (r.labels[idx] == BasinRaster::kUndecided || r.components[idx] >= 0) continue;
            int16_t lab = r.labels[idx];
            int comp = next++;
            r.components[idx] = comp;
            queue.clear();
            queue.emplace_back(x, y);
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int nx = cx + dx[k], ny = cy + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    size_t nidx = r.index(nx, ny);
                    if (r.components[nidx] >= 0 || r.labels[nidx] != lab) continue;
                    r.components[nidx] = comp;
                    queue.emplace_back(nx, ny);
                }
            }
        }
    }
    r.component_count = next;
}

}  // namespace

BasinRaster raster_basins(const RationalMap& map, const NewtonCertificate& cert,
                          const Region& region, int resolution, const DynamicsParams& params,
                          int threads) {
    if (resolution < 1) throw std::invalid_argument("raster_basins: resolution must be >= 1");
    if (!(region.width > 0.0) || !(region.height > 0.0))
        throw std::invalid_argument("raster_basins: region must have positive extent");

    BasinRaster r;
    r.region = region;
    r.width = r.height = resolution;
    r.root_count = cert.k;
    r.petal_count = cert.n;
    size_t total = static_cast<size_t>(resolution) * resolution;
    r.labels.assign(total, BasinRaster::kUndecided);
    r.iterations.assign(total, 0);

    OrbitClassifier cls(map, cert, params);
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, resolution);

    auto work = [&](int t) {
        for (int y = t; y < resolution; y += nthreads) {
            for (int x = 0; x < resolution; ++x) {
                Orbit o = cls.classify(r.pixel_center(x, y), false);
                size_t idx = r.index(x, y);
                if (o.verdict == Orbit::Verdict::converged_to_root)
                    r.labels[idx] = static_cast<int16_t>(o.target);
                else if (o.verdict == Orbit::Verdict::converged_to_infinity)
                    r.labels[idx] = static_cast<int16_t>(cert.k + o.target);
                r.iterations[idx] = o.iterations_used;
            }
        }
    };
    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    label_components(r);
    return r;
}

namespace {

// First pixel labeled `want` within Chebyshev distance `radius` of (px, py),
// scanned ring by ring in deterministic order.
std::optional<std::pair<int, int>> find_labeled_near(const BasinRaster& r, int px, int py,
                                                     int16_t want, int radius) {
    for (int ring = 0; ring <= radius; ++ring) {
        for (int dy = -ring; dy <= ring; ++dy) {
            for (int dx = -ring; dx <= ring; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                int x = px + dx, y = py + dy;
                if (x < 0 || y < 0 || x >= r.width || y >= r.height) continue;
                if (r.labels[r.index(x, y)] == want) return std::make_pair(x, y);
            }
        }
    }
    return std::nullopt;
}

// Largest t >= 0 with t*dir inside the region (ray from the origin), or
// nullopt when the ray misses the rectangle.
std::optional<double> ray_exit(const Region& reg, Complex dir) {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double xmin = reg.center.real() - 0.5 * reg.width, xmax = reg.center.real() + 0.5 * reg.width;
    double ymin = reg.center.imag() - 0.5 * reg.height, ymax = reg.center.imag() + 0.5 * reg.height;
    auto clip = [&](double d, double mn, double mx) {
        if (d == 0.0) return mn <= 0.0 && 0.0 <= mx;
        double t0 = mn / d, t1 = mx / d;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        return lo <= hi;
    };
    if (!clip(dir.real(), xmin, xmax)) return std::nullopt;
    if (!clip(dir.imag(), ymin, ymax)) return std::nullopt;
    if (hi < 0.0) return std::nullopt;
    return hi;
}

}  // namespace

std::vector<ImmediateBasin> immediate_basins(const BasinRaster& raster,
                                             const NewtonCertificate& cert) {
    std::vector<ImmediateBasin> out;
    auto merge_in = [&](int component, bool parabolic, int served) {
        for (auto& b : out) {
            if (b.component == component) {
                b.served.push_back(served);
                b.parabolic = b.parabolic || parabolic;
                return;
            }
        }
        out.push_back({component, parabolic, {served}});
    };

    for (int i = 0; i < cert.k; ++i) {
        Complex zi = cert.roots[i].z;
        auto px = raster.locate(zi);
        if (!px)
            throw RootOutsideRegion("immediate_basins: root " + std::to_string(i) +
                                    " lies outside the raster region");
        auto hit = find_labeled_near(raster, px->first, px->second, static_cast<int16_t>(i), 3);
        if (!hit)
            throw ImmediateBasinNotFound("immediate_basins: no pixel near root " +
                                         std::to_string(i) +
                                         " carries its basin label; raise the resolution");
        merge_in(raster.components[raster.index(hit->first, hit->second)], false, i);
    }

    if (cert.n >= 1) {
        std::vector<Complex> dirs = petal_directions(cert);
        for (int j = 0; j < cert.n; ++j) {
            auto exit_t = ray_exit(raster.region, dirs[j]);
            if (!exit_t)
                throw RootOutsideRegion("immediate_basins: petal direction " + std::to_string(j) +
                                        " never enters the raster region");
            int16_t want = static_cast<int16_t>(cert.k + j);
            std::optional<int> comp;
            for (double f = 0.9; f >= 0.5 - 1e-9 && !comp; f -= 0.05) {
                auto px = raster.locate(*exit_t * f * dirs[j]);
                if (!px) continue;
                size_t idx = raster.index(px->first, px->second);
                if (raster.labels[idx] == want) comp = raster.components[idx];
            }
            if (!comp)
                throw ImmediateBasinNotFound(
                    "immediate_basins: no escaping pixel found along petal direction " +
                    std::to_string(j) + "; enlarge the region or raise max_iter");
            merge_in(*comp, true, j);
        }
    }
    return out;
}

AccessCensus access_census(const RationalMap& map, const NewtonCertificate& cert,
                           const BasinRaster& raster, const std::vector<ImmediateBasin>& immediate,
                           const CriticalPoints& crit, const DynamicsParams& params) {
    AccessCensus census;
    for (const auto& b : immediate) {
        AccessCensus::BasinEntry e;
        e.component = b.component;
        e.parabolic = b.parabolic;
        e.served = b.served;
        e.dynamical_access = b.parabolic;
        census.basins.push_back(e);
    }

    auto basin_of_component = [&](int comp) -> AccessCensus::BasinEntry* {
        for (auto& e : census.basins)
            if (e.component == comp) return &e;
        return nullptr;
    };

    for (const auto& entry : crit.finite.entries) {
        Orbit orbit = classify_point(map, cert, entry.root, params);
        if (orbit.verdict == Orbit::Verdict::undecided) {
            census.unassigned.push_back(
                {entry.root, entry.multiplicity, "orbit undecided (Julia set proxy)"});
            continue;
        }
        int16_t expected = orbit.verdict == Orbit::Verdict::converged_to_root
                               ? static_cast<int16_t>(orbit.target)
                               : static_cast<int16_t>(cert.k + orbit.target);
        auto px = raster.locate(entry.root);
        if (!px)
            throw CriticalPointUnresolved(
                "access_census: critical point outside the raster region; enlarge the region");
        size_t idx = raster.index(px->first, px->second);
        if (raster.labels[idx] != expected)
            throw CriticalPointUnresolved(
                "access_census: raster label disagrees with the critical point's own orbit; "
                "raise the resolution");
        int comp = raster.components[idx];
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                int x = px->first + dx, y = px->second + dy;
                if (x < 0 || y < 0 || x >= raster.width || y >= raster.height) continue;
                if (raster.components[raster.index(x, y)] != comp)
                    throw CriticalPointUnresolved(
                        "access_census: critical point within 2 pixels of a component boundary; "
                        "raise the resolution");
            }
        }
        if (auto* basin = basin_of_component(comp)) {
            basin->critical_points += entry.multiplicity;
        } else {
            census.unassigned.push_back(
                {entry.root, entry.multiplicity, "converges inside a non-immediate component"});
        }
    }

    for (auto& e : census.basins) {
        e.restriction_degree = e.critical_points + 1;
        e.access_count = e.critical_points;
    }
    return census;
}

AccessTrace trace_dynamical_access(const RationalMap& map, const NewtonCertificate& cert,
                                   Complex z0, int petal, const DynamicsParams& params,
                                   const TraceParams& trace) {
    if (cert.n < 1) throw NotParabolic("trace_dynamical_access: infinity is not parabolic");
    if (petal < 0 || petal >= cert.n)
        throw std::invalid_argument("trace_dynamical_access: petal index out of range");
    if (trace.samples < 2) throw std::invalid_argument("trace_dynamical_access: need >= 2 samples");

    OrbitClassifier cls(map, cert, params);
    Orbit seed = cls.classify(z0, false);
    if (seed.verdict != Orbit::Verdict::converged_to_infinity || seed.target != petal)
        throw SeedNotInParabolicBasin(
            "trace_dynamical_access: seed does not converge to infinity through petal " +
            std::to_string(petal));

    SpherePoint w0 = map.eval_sphere(SpherePoint(z0));
    if (w0.is_infinity())
        throw SegmentLeavesBasin("trace_dynamical_access: N(z0) is the point at infinity");

    // eta: straight segment from z0 to N(z0)
    std::vector<Complex> eta(trace.samples);
    for (int s = 0; s < trace.samples; ++s) {
        double f = static_cast<double>(s) / (trace.samples - 1);
        eta[s] = z0 + (w0.value() - z0) * f;
    }
    for (int s = 1; s + 1 < trace.samples; ++s) {
        Orbit o = cls.classify(eta[s], false);
        if (o.verdict != Orbit::Verdict::converged_to_infinity || o.target != petal)
            throw SegmentLeavesBasin("trace_dynamical_access: sample " + std::to_string(s) +
                                     " of eta classifies outside the petal basin");
    }

    AccessTrace out;
    out.petal = petal;
    std::vector<Complex> gen = eta;
    for (int g = 0; g <= trace.generations; ++g) {
        int begin = static_cast<int>(out.polyline.size());
        out.polyline.insert(out.polyline.end(), gen.begin(), gen.end());
        out.generations.emplace_back(begin, static_cast<int>(out.polyline.size()));
        if (g == trace.generations) break;
        bool blew_up = false;
        for (Complex& p : gen) {
            SpherePoint q = map.eval_sphere(SpherePoint(p));
            if (q.is_infinity()) {
                blew_up = true;
                break;
            }
            p = q.value();
        }
        if (blew_up) break;
    }

    auto [gb, ge] = out.generations.back();
    Complex mean(0.0);
    double mean_mod = 0.0;
    for (int i = gb; i < ge; ++i) {
        double m = std::abs(out.polyline[i]);
        if (m > 0.0) mean += out.polyline[i] / m;
        mean_mod += m;
    }
    mean_mod /= std::max(1, ge - gb);
    if (std::abs(mean) > 0.0) mean /= std::abs(mean);
    out.landing_direction = mean;

    Complex dir = petal_directions(cert)[petal];
    out.angular_error = std::abs(wrap_angle(std::arg(mean) - std::arg(dir)));
    double far_enough = 10.0 * (1.0 + cert.max_root_modulus());
    if (trace.enforce_landing && mean_mod > far_enough && out.angular_error > trace.angular_tol)
        throw TraceLandingMismatch("trace_dynamical_access: landing direction misses petal " +
                                   std::to_string(petal) + " by " +
                                   std::to_string(out.angular_error) + " rad");

    out.monotone_from = static_cast<int>(out.polyline.size()) - 1;
    for (int i = static_cast<int>(out.polyline.size()) - 2; i >= 0; --i) {
        if (std::abs(out.polyline[i]) <= std::abs(out.polyline[i + 1]))
            out.monotone_from = i;
        else
            break;
    }
    return out;
}

}  // namespace newton_atlas
