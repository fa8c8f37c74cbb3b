#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "newton_atlas/errors.hpp"
#include "newton_atlas/rational_map.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace newton_atlas;
using test_support::Rng;

namespace {

// maps used across the cases: N1 = (z^2+1)/(2z), N2 = z^2/(1+z), N3 = z^2
RationalMap n1() { return RationalMap::normalized(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 2.0}); }
RationalMap n2() { return RationalMap::normalized(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0, 1.0}); }
RationalMap n3() { return RationalMap::normalized(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0}); }

bool same_map(const RationalMap& a, const RationalMap& b, double tol = 1e-10) {
    // cross multiplication comparison, insensitive to scaling
    return approx_equal(a.num() * b.den(), b.num() * a.den(), tol);
}

}  // namespace

TEST_CASE("normalize cancels common factors") {
    RationalMap m = RationalMap::normalized(Polynomial{-1.0, 0.0, 1.0}, Polynomial{-1.0, 1.0});
    CHECK(m.degree() == 1);
    CHECK(m.cancelled_degree() == 1);
    CHECK(std::abs(m(Complex(3.0)) - Complex(4.0)) < 1e-12);  // z + 1

    RationalMap coprime = n1();
    CHECK(coprime.cancelled_degree() == 0);
    CHECK(coprime.degree() == 2);

    RationalMap both = RationalMap::normalized(Polynomial{0.0, -1.0, 1.0}, Polynomial{0.0, 1.0, 1.0});
    CHECK(both.cancelled_degree() == 1);
    CHECK(std::abs(both(Complex(2.0)) - Complex(1.0 / 3.0)) < 1e-12);  // (z-1)/(z+1)

    CHECK_THROWS_AS(RationalMap::normalized(Polynomial{2.0, 2.0}, Polynomial{1.0, 1.0}),
                    DegenerateMap);
    CHECK_THROWS_AS(RationalMap::normalized(Polynomial{1.0}, Polynomial()),
                    DivisionByZeroPolynomial);
}

TEST_CASE("normalize is invariant under common factors") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Complex> na, nb, ng;
        for (int i = 0, n = rng.uniform_int(1, 4); i <= n; ++i) na.push_back(rng.disk(2.0));
        for (int i = 0, n = rng.uniform_int(0, 3); i <= n; ++i) nb.push_back(rng.disk(2.0));
        for (int i = 0, n = rng.uniform_int(0, 3); i <= n; ++i) ng.push_back(rng.disk(2.0));
        na.back() += Complex(3.0);
        nb.back() += Complex(0.0, 3.0);
        ng.back() += Complex(2.0, 2.0);
        Polynomial a(na), b(nb), g(ng);
        if (a.degree() + b.degree() == 0) continue;
        RationalMap plain = RationalMap::normalized(a, b);
        RationalMap padded = RationalMap::normalized(a * g, b * g);
        CHECK(padded.cancelled_degree() >= g.degree());
        CHECK(same_map(plain, padded, 1e-8));
    }
}

TEST_CASE("eval on the sphere") {
    RationalMap m = n1();
    CHECK(m.eval_sphere(SpherePoint(Complex(0.0))).is_infinity());
    CHECK(m.eval_sphere(SpherePoint::infinity()).is_infinity());
    SpherePoint at1 = m.eval_sphere(SpherePoint(Complex(1.0)));
    REQUIRE(!at1.is_infinity());
    CHECK(std::abs(at1.value() - Complex(1.0)) < 1e-15);

    // deg num < deg den maps infinity to 0; equal degrees to the lead ratio
    RationalMap inv = RationalMap::normalized(Polynomial{1.0}, Polynomial{0.0, 1.0});
    CHECK(inv.eval_sphere(SpherePoint::infinity()) == SpherePoint(Complex(0.0)));
    RationalMap moeb = RationalMap::normalized(Polynomial{1.0, 3.0}, Polynomial{2.0, 1.0});
    CHECK(std::abs(moeb.eval_sphere(SpherePoint::infinity()).value() - Complex(3.0)) < 1e-15);
}

TEST_CASE("derivative matches the symbolic quotient rule") {
    struct Case {
        Polynomial num, den;
    };
    Case cases[] = {
        {Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 2.0}},  // (z^2+1)/(2z)
        {Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0, 1.0}},  // z^2/(1+z)
    };
    for (const auto& c : cases) {
        RationalMap m = RationalMap::normalized(c.num, c.den);
        RationalMap d = m.derivative();
        auto oracle = test_oracles::quotient_rule(c.num.coeffs(), c.den.coeffs());
        Polynomial lhs = d.num() * Polynomial(oracle.den);
        Polynomial rhs = Polynomial(oracle.num) * d.den();
        CHECK(approx_equal(lhs.monic(), rhs.monic(), 1e-9));
    }

    // frozen value: d/dz (z^2+1)/(2z) = (z^2-1)/(2z^2), so 3/8 at z = 2
    RationalMap d1 = n1().derivative();
    Complex at2 = d1(Complex(2.0));
    CHECK(std::abs(at2 - Complex(3.0 / 8.0)) < 1e-12);
    CHECK(std::abs(test_oracles::finite_difference(n1(), Complex(2.0)) - at2) < 1e-8);

    // derivative of a degree-1 map is a constant
    RationalMap affine = RationalMap::normalized(Polynomial{Complex(0.3, 1.0), 1.0}, Polynomial{1.0});
    RationalMap da = affine.derivative();
    CHECK(da.degree() == 0);
    CHECK(std::abs(da(Complex(5.0, 2.0)) - Complex(1.0)) < 1e-15);
}

TEST_CASE("fixed points with multipliers and classification") {
    auto fps = fixed_points(n1());
    REQUIRE(fps.size() == 3);
    CHECK(std::abs(fps[0].location.value() - Complex(-1.0)) < 1e-10);
    CHECK(std::abs(fps[1].location.value() - Complex(1.0)) < 1e-10);
    for (int i = 0; i < 2; ++i) {
        CHECK(fps[i].classification == FixedPointClass::superattracting);
        CHECK(std::abs(*fps[i].multiplier) < 1e-10);
        CHECK(fps[i].fixed_multiplicity == 1);
    }
    CHECK(fps[2].location.is_infinity());
    CHECK(fps[2].fixed_multiplicity == 1);
    CHECK(std::abs(*fps[2].multiplier - Complex(2.0)) < 1e-12);
    CHECK(fps[2].classification == FixedPointClass::repelling);

    auto fps2 = fixed_points(n2());
    REQUIRE(fps2.size() == 2);
    CHECK(std::abs(fps2[0].location.value()) < 1e-12);
    CHECK(fps2[0].classification == FixedPointClass::superattracting);
    CHECK(fps2[1].location.is_infinity());
    CHECK(fps2[1].fixed_multiplicity == 2);  // parabolic, multiplicity n+1 = 2
    CHECK(!fps2[1].multiplier.has_value());
    CHECK(fps2[1].classification == FixedPointClass::rationally_indifferent);

    auto fps3 = fixed_points(n3());
    REQUIRE(fps3.size() == 3);
    CHECK(std::abs(fps3[0].location.value()) < 1e-12);
    CHECK(fps3[0].classification == FixedPointClass::superattracting);
    CHECK(std::abs(fps3[1].location.value() - Complex(1.0)) < 1e-12);
    CHECK(std::abs(*fps3[1].multiplier - Complex(2.0)) < 1e-12);
    CHECK(fps3[1].classification == FixedPointClass::repelling);
    CHECK(fps3[2].location.is_infinity());
    CHECK(fps3[2].classification == FixedPointClass::superattracting);
}

TEST_CASE("multiple finite fixed point forces multiplier one") {
    // N = (2z^2 - 2z + 1)/z has z*B - A = -(z-1)^2
    RationalMap m = RationalMap::normalized(Polynomial{1.0, -2.0, 2.0}, Polynomial{0.0, 1.0});
    auto fps = fixed_points(m);
    REQUIRE(fps.size() == 2);
    CHECK(fps[0].fixed_multiplicity == 2);
    CHECK(std::abs(fps[0].location.value() - Complex(1.0)) < 1e-6);
    CHECK(*fps[0].multiplier == Complex(1.0));
    CHECK(fps[0].classification == FixedPointClass::rationally_indifferent);
}

TEST_CASE("partial fractions of the displacement") {
    auto pf1 = partial_fractions_of_displacement(n1());
    CHECK(pf1.polynomial_part.is_zero());
    REQUIRE(pf1.poles.size() == 2);
    CHECK(std::abs(pf1.poles[0].location - Complex(-1.0)) < 1e-10);
    CHECK(std::abs(pf1.poles[0].residue() - Complex(1.0)) < 1e-10);
    CHECK(std::abs(pf1.poles[1].location - Complex(1.0)) < 1e-10);
    CHECK(std::abs(pf1.poles[1].residue() - Complex(1.0)) < 1e-10);

    auto pf2 = partial_fractions_of_displacement(n2());
    CHECK(pf2.polynomial_part.degree() == 0);
    CHECK(std::abs(pf2.polynomial_part.coeff(0) - Complex(1.0)) < 1e-12);
    REQUIRE(pf2.poles.size() == 1);
    CHECK(std::abs(pf2.poles[0].location) < 1e-12);
    CHECK(std::abs(pf2.poles[0].residue() - Complex(1.0)) < 1e-10);

    auto pf3 = partial_fractions_of_displacement(n3());
    CHECK(pf3.polynomial_part.is_zero());
    REQUIRE(pf3.poles.size() == 2);
    CHECK(std::abs(pf3.poles[0].location) < 1e-12);
    CHECK(std::abs(pf3.poles[0].residue() - Complex(1.0)) < 1e-10);
    CHECK(std::abs(pf3.poles[1].location - Complex(1.0)) < 1e-12);
    CHECK(std::abs(pf3.poles[1].residue() - Complex(-1.0)) < 1e-10);

    // identity map is rejected
    RationalMap ident = RationalMap::normalized(Polynomial{0.0, 1.0}, Polynomial{1.0});
    CHECK_THROWS_AS(partial_fractions_of_displacement(ident), DegenerateMap);
}

TEST_CASE("higher order pole carries the full principal part") {
    RationalMap m = RationalMap::normalized(Polynomial{1.0, -2.0, 2.0}, Polynomial{0.0, 1.0});
    auto pf = partial_fractions_of_displacement(m);
    REQUIRE(pf.poles.size() == 1);
    REQUIRE(pf.poles[0].order() == 2);
    // 1/(z-N) = -z/(z-1)^2 = -1/(z-1) - 1/(z-1)^2
    CHECK(std::abs(pf.poles[0].principal[0] - Complex(-1.0)) < 1e-8);
    CHECK(std::abs(pf.poles[0].principal[1] - Complex(-1.0)) < 1e-8);
    CHECK(std::abs(pf.poles[0].principal.back()) > 0.0);
    Complex z(3.0, 0.5);
    Complex direct = Complex(1.0) / (z - m(z));
    CHECK(std::abs(pf.evaluate(z) - direct) < 1e-10);
}

TEST_CASE("reassembly and the residue-multiplier law on random maps") {
    Rng rng(22);
    int done = 0;
    for (int trial = 0; trial < 200 && done < 25; ++trial) {
        // random map fixing infinity, built as N = z - 1/F with
        // F = sum r_i/(z - z_i) + s for random residues and polynomial s
        int k = rng.uniform_int(1, 4);
        int sdeg = rng.uniform_int(0, 3);
        std::vector<Complex> zs;
        while (static_cast<int>(zs.size()) < k) {
            Complex z = rng.disk();
            bool ok = true;
            for (Complex w : zs)
                if (std::abs(w - z) < 0.2) ok = false;
            if (ok) zs.push_back(z);
        }
        std::vector<Complex> rs;
        for (int i = 0; i < k; ++i) {
            Complex r = rng.disk(2.0);
            if (std::abs(r) < 0.2) r += Complex(0.7);
            rs.push_back(r);
        }
        std::vector<Complex> sc;
        for (int i = 0; i <= sdeg; ++i) sc.push_back(rng.disk());
        // F = Fn/Fd over the common denominator prod (z - z_i)
        test_oracles::Coeffs fd{Complex(1.0)};
        for (Complex z : zs) fd = test_oracles::naive_mul(fd, {-z, Complex(1.0)});
        test_oracles::Coeffs fn = test_oracles::naive_mul(sc, fd);
        for (int i = 0; i < k; ++i) {
            test_oracles::Coeffs term{rs[i]};
            for (int j = 0; j < k; ++j)
                if (j != i) term = test_oracles::naive_mul(term, {-zs[j], Complex(1.0)});
            if (fn.size() < term.size()) fn.resize(term.size(), Complex(0.0));
            for (size_t t = 0; t < term.size(); ++t) fn[t] += term[t];
        }
        Polynomial fnp{fn}, fdp{fd};
        if (fnp.is_zero()) continue;
        // N = z - Fd/Fn = (z*Fn - Fd)/Fn
        Polynomial num = fnp.times_z() - fdp;
        RationalMap m = RationalMap::normalized(num, fnp);
        if (m.degree() < 2 || !m.fixes_infinity()) continue;
        ++done;

        auto pf = partial_fractions_of_displacement(m);
        Rng sample_rng(1000 + trial);
        for (int s = 0; s < 100; ++s) {
            Complex z = sample_rng.disk(3.0);
            double nearest = 1e9;
            for (const auto& pole : pf.poles) nearest = std::min(nearest, std::abs(z - pole.location));
            if (nearest < 0.1) continue;
            Complex direct = Complex(1.0) / (z - m(z));
            if (std::abs(direct) > 1e6) continue;
            CHECK(std::abs(pf.evaluate(z) - direct) < 1e-8 * std::max(1.0, std::abs(direct)));
        }

        // residue = 1/(1 - N'(z_i)) at simple fixed points
        RationalMap dm = m.derivative();
        for (const auto& pole : pf.poles) {
            if (pole.order() != 1) continue;
            Complex lambda = dm.num()(pole.location) / dm.den()(pole.location);
            Complex expected = Complex(1.0) / (Complex(1.0) - lambda);
            CHECK(std::abs(pole.residue() - expected) < 1e-8 * std::max(1.0, std::abs(expected)));
        }
    }
    CHECK(done >= 20);
}

TEST_CASE("fixed point count equals displacement degree") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> na, nb;
        int da = rng.uniform_int(2, 5);
        for (int i = 0; i <= da; ++i) na.push_back(rng.disk(2.0));
        for (int i = 0; i <= da - 1; ++i) nb.push_back(rng.disk(2.0));
        na.back() += Complex(2.0);
        nb.back() += Complex(0.0, 2.0);
        RationalMap m = RationalMap::normalized(Polynomial(na), Polynomial(nb));
        Polynomial t = m.displacement_numerator();
        if (t.degree() < 1) continue;
        auto fps = fixed_points(m);
        int finite_mult = 0;
        for (const auto& f : fps)
            if (!f.location.is_infinity()) finite_mult += f.fixed_multiplicity;
        CHECK(finite_mult == t.degree());
    }
}
