#include "newton_atlas/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "newton_atlas/errors.hpp"

namespace newton_atlas {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Taylor coefficients of p around z0 up to order `count - 1` (repeated
// synthetic division; stable for the small degrees used here).
std::vector<Complex> taylor_at(const Polynomial& p, Complex z0, int count) {
    std::vector<Complex> out;
    out.reserve(count);
    Polynomial cur = p;
    for (int i = 0; i < count; ++i) {
        auto [q, r] = divide_linear(cur, z0);
        out.push_back(r);
        cur = std::move(q);
        if (cur.is_zero()) {
            out.resize(count, Complex(0.0));
            break;
        }
    }
    out.resize(count, Complex(0.0));
    return out;
}

}  // namespace

RationalMap RationalMap::reduced(Polynomial num, Polynomial den, const RatmapOptions& opts) {
    if (den.is_zero()) throw DivisionByZeroPolynomial("rational map: denominator is zero");
    RationalMap m;
    m.num_ = std::move(num);
    m.den_ = std::move(den);
    if (!m.num_.is_zero() && m.den_.degree() > 0 && m.num_.degree() > 0) {
        Polynomial g = gcd_approx(m.num_, m.den_, opts.coprime_tol);
        if (g.degree() > 0) {
            m.num_ = divmod(m.num_, g).quotient;
            m.den_ = divmod(m.den_, g).quotient;
            m.cancelled_degree_ = g.degree();
        }
    }
    // canonical scaling: monic denominator
    Complex scale = Complex(1.0) / m.den_.leading();
    m.num_ *= scale;
    m.den_ = m.den_.monic();
    return m;
}

RationalMap RationalMap::normalized(Polynomial num, Polynomial den, const RatmapOptions& opts) {
    RationalMap m = reduced(std::move(num), std::move(den), opts);
    if (m.degree() < 1)
        throw DegenerateMap("rational map reduces to a constant (degree 0 after normalization)");
    return m;
}

SpherePoint RationalMap::eval_sphere(SpherePoint z) const {
    if (z.is_infinity()) {
        int dn = num_.degree(), dd = den_.degree();
        if (dn > dd) return SpherePoint::infinity();
        if (dn < dd) return SpherePoint(Complex(0.0));
        return SpherePoint(num_.leading() / den_.leading());
    }
    Complex nv = num_(z.value());
    Complex dv = den_(z.value());
    if (dv == Complex(0.0)) return SpherePoint::infinity();
    Complex w = nv / dv;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return SpherePoint::infinity();
    return SpherePoint(w);
}

RationalMap RationalMap::derivative(const RatmapOptions& opts) const {
    Polynomial w = wronskian();
    if (w.is_zero()) {
        RationalMap d;
        d.den_ = Polynomial::constant(Complex(1.0));
        return d;
    }
    // the derivative of a degree-1 map is a constant, so skip the degree check
    return reduced(std::move(w), den_ * den_, opts);
}

Polynomial RationalMap::displacement_numerator(const RatmapOptions& opts) const {
    Polynomial t = den_.times_z() - num_;
    return t.trimmed(opts.trim_rel_tol);
}

Polynomial RationalMap::wronskian() const { return num_.derivative() * den_ - num_ * den_.derivative(); }

const char* to_string(FixedPointClass c) {
    switch (c) {
        case FixedPointClass::superattracting: return "superattracting";
        case FixedPointClass::attracting: return "attracting";
        case FixedPointClass::repelling: return "repelling";
        case FixedPointClass::rationally_indifferent: return "rationally_indifferent";
        case FixedPointClass::irrationally_indifferent: return "irrationally_indifferent";
    }
    return "?";
}

namespace {

FixedPointClass classify_multiplier(Complex lambda, double tol) {
    double a = std::abs(lambda);
    if (a <= tol) return FixedPointClass::superattracting;
    if (a < 1.0 - tol) return FixedPointClass::attracting;
    if (a > 1.0 + tol) return FixedPointClass::repelling;
    // on the unit circle: rationally indifferent when lambda is (numerically)
    // a root of unity of small order
    Complex w = lambda;
    for (int j = 1; j <= 64; ++j) {
        if (std::abs(w - Complex(1.0)) <= 64.0 * tol) return FixedPointClass::rationally_indifferent;
        w *= lambda;
    }
    return FixedPointClass::irrationally_indifferent;
}

}  // namespace

std::vector<FixedPointRecord> fixed_points(const RationalMap& n, const RatmapOptions& opts) {
    if (n.degree() < 1) throw DegenerateMap("fixed_points: map must have degree >= 1");
    Polynomial t = n.displacement_numerator(opts);
    std::vector<FixedPointRecord> out;

    RationalMap dn = n.derivative(opts);
    if (t.degree() >= 1) {
        RootOptions ro;
        ro.cluster_radius = opts.pole_cluster_radius;
        RootSet rs = roots(t, ro);
        for (const auto& e : rs.entries) {
            FixedPointRecord rec;
            rec.location = SpherePoint(e.root);
            rec.fixed_multiplicity = e.multiplicity;
            if (e.multiplicity >= 2) {
                // a multiple root of N(z) = z forces multiplier exactly 1
                rec.multiplier = Complex(1.0);
                rec.classification = FixedPointClass::rationally_indifferent;
            } else {
                Complex lambda = dn.num()(e.root) / dn.den()(e.root);
                rec.multiplier = lambda;
                rec.classification = classify_multiplier(lambda, opts.classify_tol);
            }
            out.push_back(rec);
        }
    }

    if (n.fixes_infinity()) {
        FixedPointRecord rec;
        rec.location = SpherePoint::infinity();
        int d = n.degree();
        int finite = t.is_zero() ? 0 : std::max(t.degree(), 0);
        rec.fixed_multiplicity = d + 1 - finite;
        int gap = n.num().degree() - n.den().degree();
        if (rec.fixed_multiplicity >= 2) {
            rec.multiplier.reset();  // parabolic at infinity, multiplier forced +1
            rec.classification = FixedPointClass::rationally_indifferent;
        } else if (gap >= 2) {
            rec.multiplier = Complex(0.0);
            rec.classification = FixedPointClass::superattracting;
        } else {
            // multiplier at infinity in the w = 1/z chart
            Complex lambda = n.den().leading() / n.num().leading();
            rec.multiplier = lambda;
            rec.classification = classify_multiplier(lambda, opts.classify_tol);
        }
        out.push_back(rec);
    }
    return out;
}

Complex PartialFractionDecomp::evaluate(Complex z) const {
    Complex acc = polynomial_part.is_zero() ? Complex(0.0) : polynomial_part(z);
    for (const auto& pole : poles) {
        Complex w = Complex(1.0) / (z - pole.location);
        Complex pw = w;
        for (Complex c : pole.principal) {
            acc += c * pw;
            pw *= w;
        }
    }
    return acc;
}

PartialFractionDecomp partial_fractions_of_displacement(const RationalMap& n,
                                                        const RatmapOptions& opts) {
    Polynomial t = n.displacement_numerator(opts);
    if (t.is_zero()) throw DegenerateMap("partial fractions: N is the identity map");
    const Polynomial& b = n.den();

    PartialFractionDecomp out;
    out.polynomial_part = divmod(b, t).quotient;

    if (t.degree() >= 1) {
        RootOptions ro;
        ro.cluster_radius = opts.pole_cluster_radius;
        RootSet rs = roots(t, ro);
        Polynomial tp = t.derivative();
        for (const auto& e : rs.entries) {
            PartialFractionDecomp::Pole pole;
            pole.location = e.root;
            if (e.multiplicity == 1) {
                pole.principal = {b(e.root) / tp(e.root)};
            } else {
                // u = t / (z - p)^mu, then Taylor-divide b by u around p
                Polynomial u = t;
                for (int i = 0; i < e.multiplicity; ++i) u = divide_linear(u, e.root).first;
                std::vector<Complex> bt = taylor_at(b, e.root, e.multiplicity);
                std::vector<Complex> ut = taylor_at(u, e.root, e.multiplicity);
                std::vector<Complex> series(e.multiplicity, Complex(0.0));
                for (int i = 0; i < e.multiplicity; ++i) {
                    Complex acc = bt[i];
                    for (int j = 0; j < i; ++j) acc -= series[j] * ut[i - j];
                    series[i] = acc / ut[0];
                }
                // series[j] multiplies (z-p)^(j - mu)
                pole.principal.assign(e.multiplicity, Complex(0.0));
                for (int j = 0; j < e.multiplicity; ++j)
                    pole.principal[e.multiplicity - 1 - j] = series[j];
            }
            out.poles.push_back(std::move(pole));
        }
        std::sort(out.poles.begin(), out.poles.end(),
                  [](const PartialFractionDecomp::Pole& a, const PartialFractionDecomp::Pole& b2) {
                      return lex_less(a.location, b2.location);
                  });
    }
    return out;
}

}  // namespace newton_atlas
