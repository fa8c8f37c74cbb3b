#include "newton_atlas/newton_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "newton_atlas/errors.hpp"

namespace newton_atlas {

namespace {

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

Polynomial normalize_q(const Polynomial& q) {
    if (q.is_zero()) return q;
    std::vector<Complex> c = q.coeffs();
    c[0] = Complex(0.0);
    return Polynomial(std::move(c));
}

}  // namespace

int NewtonCertificate::total_multiplicity() const {
    int t = 0;
    for (const auto& r : roots) t += r.m;
    return t;
}

double NewtonCertificate::max_root_modulus() const {
    double m = 0.0;
    for (const auto& r : roots) m = std::max(m, std::abs(r.z));
    return m;
}

const char* to_string(RejectionKind k) {
    switch (k) {
        case RejectionKind::InfinityNotFixed: return "InfinityNotFixed";
        case RejectionKind::HigherOrderPole: return "HigherOrderPole";
        case RejectionKind::NonIntegerResidue: return "NonIntegerResidue";
        case RejectionKind::NonPositiveResidue: return "NonPositiveResidue";
    }
    return "?";
}

std::string NotNewton::describe() const {
    std::string s = to_string(kind);
    if (location) {
        s += " at z = (" + std::to_string(location->real()) + ", " +
             std::to_string(location->imag()) + ")";
    }
    if (residue) {
        s += ", residue (" + std::to_string(residue->real()) + ", " +
             std::to_string(residue->imag()) + ")";
    }
    if (kind == RejectionKind::HigherOrderPole) s += ", order " + std::to_string(pole_order);
    if (near_miss) s += " [near miss]";
    return s;
}

ConstructResult construct(std::span<const NewtonCertificate::Root> p_roots, const Polynomial& q,
                          const NewtonOptions& opts) {
    NewtonCertificate cert;
    for (const auto& r : p_roots) {
        if (r.m < 1) throw std::invalid_argument("construct: multiplicities must be >= 1");
        cert.roots.push_back(r);
    }
    std::sort(cert.roots.begin(), cert.roots.end(),
              [](const NewtonCertificate::Root& a, const NewtonCertificate::Root& b) {
                  return lex_less(a.z, b.z);
              });
    for (size_t i = 1; i < cert.roots.size(); ++i)
        if (cert.roots[i].z == cert.roots[i - 1].z)
            throw std::invalid_argument("construct: duplicate roots; pass one entry per distinct root");

    cert.q = normalize_q(q);
    cert.k = static_cast<int>(cert.roots.size());
    cert.n = std::max(cert.q.degree(), 0);
    cert.degree = cert.k + cert.n;
    if (cert.degree < 2)
        throw DegenerateMap("construct: k + deg q < 2 gives a constant or Moebius Newton map");

    // p = prod (z - z_i)^{m_i}
    Polynomial p = Polynomial::constant(Complex(1.0));
    for (const auto& r : cert.roots) {
        std::vector<Complex> reps(static_cast<size_t>(r.m), r.z);
        p *= Polynomial::from_roots(reps);
    }
    Polynomial denom = p.derivative() + p * cert.q.derivative();
    Polynomial numer = denom.times_z() - p;

    RationalMap map = RationalMap::normalized(numer, denom, opts.ratmap);
    if (map.degree() != cert.degree)
        throw NumericalFailure("construct: reduced degree " + std::to_string(map.degree()) +
                               " does not match k + deg q = " + std::to_string(cert.degree));
    return {std::move(map), std::move(cert)};
}

DetectResult detect(const RationalMap& map, const NewtonOptions& opts) {
    if (map.degree() < 2) throw DegenerateMap("detect: map degree must be >= 2");

    DetectResult out;
    if (!map.fixes_infinity()) {
        out.rejection = NotNewton{RejectionKind::InfinityNotFixed, {}, {}, 0, false};
        return out;
    }

    PartialFractionDecomp pf = partial_fractions_of_displacement(map, opts.ratmap);

    const double tol = opts.integer_tol;
    for (const auto& pole : pf.poles) {
        PoleDiagnostic diag;
        diag.location = pole.location;
        diag.order = pole.order();
        diag.residue = pole.residue();
        if (pole.order() > 1) {
            out.poles.push_back(diag);
            if (!out.rejection)
                out.rejection = NotNewton{RejectionKind::HigherOrderPole, pole.location, {},
                                          pole.order(), false};
            continue;
        }
        Complex r = pole.residue();
        double nearest = std::round(r.real());
        double dev = std::max(std::abs(r.real() - nearest), std::abs(r.imag()));
        if (dev > tol) {
            out.poles.push_back(diag);
            if (!out.rejection)
                out.rejection = NotNewton{RejectionKind::NonIntegerResidue, pole.location, r, 1,
                                          dev <= 10.0 * tol};
            continue;
        }
        int m = static_cast<int>(nearest);
        if (m < 1) {
            out.poles.push_back(diag);
            if (!out.rejection)
                out.rejection =
                    NotNewton{RejectionKind::NonPositiveResidue, pole.location, r, 1, false};
            continue;
        }
        diag.snapped_m = m;
        diag.accepted = true;
        out.poles.push_back(diag);
    }
    if (out.rejection) return out;

    NewtonCertificate cert;
    for (const auto& diag : out.poles) cert.roots.push_back({diag.location, diag.snapped_m});
    cert.q = normalize_q(pf.polynomial_part.antiderivative());
    cert.k = static_cast<int>(cert.roots.size());
    cert.n = std::max(cert.q.degree(), 0);
    cert.degree = cert.k + cert.n;
    if (cert.degree != map.degree())
        throw NumericalFailure("detect: certificate degree k + n = " + std::to_string(cert.degree) +
                               " disagrees with map degree " + std::to_string(map.degree()));
    out.certificate = std::move(cert);
    return out;
}

MultiplierReport validate_multipliers(const RationalMap& map, const NewtonCertificate& cert,
                                      double tol) {
    MultiplierReport rep;
    rep.tol = tol;
    RationalMap deriv = map.derivative();
    for (const auto& r : cert.roots) {
        Complex lambda = deriv.num()(r.z) / deriv.den()(r.z);
        Complex expected(static_cast<double>(r.m - 1) / r.m, 0.0);
        MultiplierReport::Entry e{r.z, r.m, lambda, std::abs(lambda - expected)};
        if (e.deviation > rep.worst) {
            rep.worst = e.deviation;
            rep.worst_point = r.z;
        }
        rep.entries.push_back(e);
    }
    rep.ok = rep.worst <= tol;
    return rep;
}

InfinityClassification classify_infinity(const NewtonCertificate& cert) {
    InfinityClassification out;
    if (cert.n == 0) {
        int m = cert.total_multiplicity();
        out.kind = InfinityKind::repelling;
        out.multiplier = static_cast<double>(m) / (m - 1);
    } else {
        out.kind = InfinityKind::parabolic;
        out.parabolic_multiplicity = cert.n + 1;
        out.petal_count = cert.n;
    }
    return out;
}

std::vector<Complex> petal_directions(const NewtonCertificate& cert) {
    if (cert.n < 1) throw NotParabolic("petal_directions: infinity is not parabolic (deg q = 0)");
    // near infinity N(z) = z - 1/(n q_n z^{n-1}) + ..., so in the w = 1/z chart
    // g(w) = w + w^{n+1}/(n q_n) + ...; the attracting directions in the z
    // chart solve v^n = -t/q_n for t > 0
    Complex qn = cert.q.leading();
    double base = (M_PI - std::arg(qn)) / cert.n;
    std::vector<Complex> dirs;
    for (int j = 0; j < cert.n; ++j)
        dirs.push_back(std::polar(1.0, base + 2.0 * M_PI * j / cert.n));
    std::sort(dirs.begin(), dirs.end(),
              [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    return dirs;
}

}  // namespace newton_atlas
