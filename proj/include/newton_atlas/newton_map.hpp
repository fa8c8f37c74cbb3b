#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newton_atlas/rational_map.hpp"

namespace newton_atlas {

/// Witness that a rational map N is the Newton map of p * e^q: the distinct
/// roots z_i of p with integer multiplicities m_i, and the polynomial q
/// normalized to q(0) = 0. The map degree always equals k + n.
struct NewtonCertificate {
    struct Root {
        Complex z;
        int m = 1;
    };
    std::vector<Root> roots;  // sorted by (re, im)
    Polynomial q;             // q(0) == 0
    int k = 0;                // number of distinct roots of p
    int n = 0;                // deg q
    int degree = 0;           // k + n

    int total_multiplicity() const;  // m = sum m_i = deg p
    double max_root_modulus() const;
};

enum class RejectionKind {
    InfinityNotFixed,
    HigherOrderPole,
    NonIntegerResidue,
    NonPositiveResidue,
};

const char* to_string(RejectionKind k);

/// Structured reason why a map is not a Newton map (Theorem 3 criterion).
struct NotNewton {
    RejectionKind kind;
    std::optional<Complex> location;  // offending fixed point, when applicable
    std::optional<Complex> residue;   // offending residue value
    int pole_order = 0;               // for HigherOrderPole
    /// Residue within 10x of the snap tolerance but outside it; diagnostic
    /// only, never turned into an acceptance guess.
    bool near_miss = false;
    std::string describe() const;
};

/// Per-pole diagnostics from detection: raw residue plus the snapped integer.
struct PoleDiagnostic {
    Complex location;
    int order = 1;
    Complex residue{0.0, 0.0};
    int snapped_m = 0;  // 0 when no integer was accepted
    bool accepted = false;
};

struct DetectResult {
    std::optional<NewtonCertificate> certificate;
    std::optional<NotNewton> rejection;
    std::vector<PoleDiagnostic> poles;
    bool is_newton() const { return certificate.has_value(); }
};

struct NewtonOptions {
    /// Residue r is accepted as integer m when |Re r - round(Re r)| <= tol and
    /// |Im r| <= tol.
    double integer_tol = 1e-6;
    RatmapOptions ratmap;
};

struct ConstructResult {
    RationalMap map;
    NewtonCertificate certificate;
};

/// Builds N = z - p/(p' + p q') from the roots of p and the polynomial q, then
/// reduces to lowest terms; the reduction removes a factor of degree exactly
/// sum(m_i - 1). Throws DegenerateMap when k + deg q < 2 and
/// std::invalid_argument for non-positive multiplicities or duplicate roots.
ConstructResult construct(std::span<const NewtonCertificate::Root> p_roots, const Polynomial& q,
                          const NewtonOptions& opts = {});

/// Theorem-3 test: decomposes 1/(z - N(z)) and accepts exactly when every pole
/// is simple with residue a positive integer (within opts.integer_tol). The
/// map must have degree >= 2 (throws DegenerateMap otherwise); a map that does
/// not fix infinity is rejected with InfinityNotFixed, not conjugated.
DetectResult detect(const RationalMap& map, const NewtonOptions& opts = {});

/// Multiplier law check: N'(z_i) == (m_i - 1)/m_i at every certificate root.
struct MultiplierReport {
    struct Entry {
        Complex z;
        int m = 1;
        Complex multiplier{0.0, 0.0};
        double deviation = 0.0;
    };
    std::vector<Entry> entries;
    double worst = 0.0;
    std::optional<Complex> worst_point;
    double tol = 0.0;
    bool ok = false;
};

MultiplierReport validate_multipliers(const RationalMap& map, const NewtonCertificate& cert,
                                      double tol = 1e-6);

enum class InfinityKind { repelling, parabolic };

/// Character of the fixed point at infinity: repelling with multiplier
/// m/(m-1) when q is constant, parabolic with multiplicity n+1 (n petals)
/// when deg q = n >= 1.
struct InfinityClassification {
    InfinityKind kind = InfinityKind::repelling;
    double multiplier = 0.0;         // repelling only
    int parabolic_multiplicity = 0;  // parabolic only: n + 1
    int petal_count = 0;             // parabolic only: n
};

InfinityClassification classify_infinity(const NewtonCertificate& cert);

/// The n attracting directions at the parabolic point at infinity: unit
/// vectors v with v^n = -t / q_n (t > 0, q_n the leading coefficient of q),
/// sorted by argument. Throws NotParabolic when deg q = 0.
std::vector<Complex> petal_directions(const NewtonCertificate& cert);

}  // namespace newton_atlas
