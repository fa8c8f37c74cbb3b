#pragma once

#include <optional>
#include <vector>

#include "newton_atlas/polynomial.hpp"

namespace newton_atlas {

/// A point of the Riemann sphere: a finite complex number or the distinguished
/// point at infinity (never encoded as a large float).
class SpherePoint {
public:
    SpherePoint() = default;
    SpherePoint(Complex z) : z_(z) {}
    static SpherePoint infinity() {
        SpherePoint p;
        p.infinite_ = true;
        return p;
    }
    bool is_infinity() const { return infinite_; }
    Complex value() const { return z_; }

    bool operator==(const SpherePoint& o) const {
        return infinite_ == o.infinite_ && (infinite_ || z_ == o.z_);
    }

private:
    Complex z_{0.0, 0.0};
    bool infinite_ = false;
};

struct RatmapOptions {
    double coprime_tol = 1e-10;         // gcd tolerance when reducing to lowest terms
    double trim_rel_tol = 1e-10;        // degree trim for the displacement numerator
    double pole_cluster_radius = 1e-5;  // fixed-point / pole merge radius
    double classify_tol = 1e-9;         // |lambda| bands for the fixed point classes
};

/// Rational map N = num/den on the Riemann sphere, reduced to lowest terms at
/// construction (approximate gcd cancellation), denominator normalized monic.
class RationalMap {
public:
    /// Throws DivisionByZeroPolynomial when den == 0, DegenerateMap when the
    /// reduced map is constant.
    static RationalMap normalized(Polynomial num, Polynomial den, const RatmapOptions& opts = {});

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    int degree() const { return std::max(num_.degree(), den_.degree()); }

    /// Degree of the common factor removed at construction.
    int cancelled_degree() const { return cancelled_degree_; }

    /// N(infinity) == infinity, i.e. deg num > deg den.
    bool fixes_infinity() const { return num_.degree() > den_.degree(); }

    /// Plain finite-arithmetic evaluation num(z)/den(z).
    Complex operator()(Complex z) const { return num_(z) / den_(z); }

    SpherePoint eval_sphere(SpherePoint z) const;

    /// N' as a normalized rational map (quotient rule, then reduction).
    RationalMap derivative(const RatmapOptions& opts = {}) const;

    /// Numerator of z - N(z): trim(z*den - num). Its roots are the finite
    /// fixed points. The trim removes the floating-point residue of the exact
    /// leading-coefficient cancellation that occurs when the multiplier at
    /// infinity is 1.
    Polynomial displacement_numerator(const RatmapOptions& opts = {}) const;

    /// num' * den - num * den', without reduction. Zeros (with multiplicity)
    /// are exactly the finite critical points, including multiple poles that a
    /// reduced derivative would lose.
    Polynomial wronskian() const;

private:
    RationalMap() = default;
    static RationalMap reduced(Polynomial num, Polynomial den, const RatmapOptions& opts);
    Polynomial num_, den_;
    int cancelled_degree_ = 0;
};

enum class FixedPointClass {
    superattracting,
    attracting,
    repelling,
    rationally_indifferent,
    irrationally_indifferent,
};

const char* to_string(FixedPointClass c);

struct FixedPointRecord {
    SpherePoint location;
    /// Absent for a multiple fixed point at infinity (parabolic, forced +1).
    std::optional<Complex> multiplier;
    int fixed_multiplicity = 1;  // multiplicity as a root of N(z) = z
    FixedPointClass classification = FixedPointClass::attracting;
};

/// All fixed points: the finite ones (roots of z*den - num, with multiplicity
/// and multiplier), plus an infinity record when N fixes infinity. Finite
/// records sorted by (re, im); the infinity record, if any, comes last.
std::vector<FixedPointRecord> fixed_points(const RationalMap& n, const RatmapOptions& opts = {});

/// Decomposition of 1/(z - N(z)) = s(z) + sum of principal parts.
struct PartialFractionDecomp {
    struct Pole {
        Complex location;
        /// principal[i] = coefficient of (z - location)^-(i+1); the last entry
        /// (the top-order coefficient) is nonzero.
        std::vector<Complex> principal;
        int order() const { return static_cast<int>(principal.size()); }
        Complex residue() const { return principal.front(); }
    };
    Polynomial polynomial_part;  // s
    std::vector<Pole> poles;     // sorted by (re, im)

    /// Pointwise reassembly s(z) + sum_i principal_i(z).
    Complex evaluate(Complex z) const;
};

/// Decomposes B/(z*B - A) for N = A/B. Simple poles carry the analytically
/// exact residue B(p)/T'(p); higher-order poles carry the full principal part
/// from a local Taylor division. Throws DegenerateMap when N is the identity.
PartialFractionDecomp partial_fractions_of_displacement(const RationalMap& n,
                                                        const RatmapOptions& opts = {});

}  // namespace newton_atlas
