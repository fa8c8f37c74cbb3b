#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "newton_atlas/errors.hpp"
#include "newton_atlas/newton_map.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace newton_atlas;
using test_support::Rng;

namespace {

using Root = NewtonCertificate::Root;

bool same_map(const RationalMap& a, const RationalMap& b, double tol = 1e-9) {
    return approx_equal(a.num() * b.den(), b.num() * a.den(), tol);
}

}  // namespace

TEST_CASE("construct the classic examples") {
    auto quad = construct(std::vector<Root>{{Complex(1.0), 1}, {Complex(-1.0), 1}}, Polynomial());
    CHECK(quad.certificate.degree == 2);
    CHECK(quad.certificate.k == 2);
    CHECK(quad.certificate.n == 0);
    RationalMap frozen = RationalMap::normalized(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 2.0});
    CHECK(same_map(quad.map, frozen));

    auto par = construct(std::vector<Root>{{Complex(0.0), 1}}, Polynomial::variable());
    CHECK(par.certificate.degree == 2);
    RationalMap frozen2 = RationalMap::normalized(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0, 1.0});
    CHECK(same_map(par.map, frozen2));

    CHECK_THROWS_AS(construct(std::vector<Root>{{Complex(0.0), 1}}, Polynomial()), DegenerateMap);
    // multiplicities do not raise the Newton map degree: k=1, m=3 is Moebius
    CHECK_THROWS_AS(construct(std::vector<Root>{{Complex(0.0), 3}}, Polynomial()), DegenerateMap);
    CHECK_THROWS_AS(construct(std::vector<Root>{{Complex(0.0), 0}, {Complex(1.0), 1}}, Polynomial()),
                    std::invalid_argument);
}

TEST_CASE("construct cancels exactly the multiple-root factor") {
    // sum (m_i - 1) = 3 here
    std::vector<Root> roots{{Complex(0.2, 0.3), 3}, {Complex(-0.5, 0.1), 2}, {Complex(0.9, -0.4), 1}};
    Polynomial q{0.0, Complex(0.3, 0.1), Complex(0.5, -0.2)};
    auto built = construct(roots, q);
    CHECK(built.map.degree() == 3 + 2);
    CHECK(built.map.cancelled_degree() == 3);
    CHECK(built.certificate.degree == 5);

    // simple roots produce no cancellation
    auto simple = construct(std::vector<Root>{{Complex(0.4), 1}, {Complex(-0.7, 0.2), 1}}, q);
    CHECK(simple.map.cancelled_degree() == 0);
}

TEST_CASE("construct with no finite roots (p = 1)") {
    // f = e^q with deg q = 2: N = z - 1/q'
    Polynomial q{0.0, 0.0, 0.5};
    auto built = construct(std::vector<Root>{}, q);
    CHECK(built.certificate.k == 0);
    CHECK(built.certificate.n == 2);
    CHECK(built.map.degree() == 2);
    // N = z - 1/z for q = z^2/2
    CHECK(std::abs(built.map(Complex(2.0)) - Complex(1.5)) < 1e-12);
}

TEST_CASE("detect accepts Newton maps and rebuilds the certificate") {
    RationalMap m = RationalMap::normalized(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 2.0});
    DetectResult det = detect(m);
    REQUIRE(det.is_newton());
    const auto& cert = *det.certificate;
    CHECK(cert.k == 2);
    CHECK(cert.n == 0);
    CHECK(cert.degree == 2);
    CHECK(std::abs(cert.roots[0].z - Complex(-1.0)) < 1e-9);
    CHECK(std::abs(cert.roots[1].z - Complex(1.0)) < 1e-9);
    CHECK(cert.roots[0].m == 1);
    CHECK(cert.q.is_zero());

    RationalMap par = RationalMap::normalized(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0, 1.0});
    DetectResult det2 = detect(par);
    REQUIRE(det2.is_newton());
    CHECK(det2.certificate->k == 1);
    CHECK(det2.certificate->n == 1);
    CHECK(std::abs(det2.certificate->roots[0].z) < 1e-10);
    // q = z with the q(0) = 0 normalization
    CHECK(det2.certificate->q.degree() == 1);
    CHECK(std::abs(det2.certificate->q.coeff(1) - Complex(1.0)) < 1e-10);
    CHECK(std::abs(det2.certificate->q.coeff(0)) == 0.0);
}

TEST_CASE("detect rejections carry the structured reason") {
    // z^2: residue -1 at the fixed point 1
    RationalMap sq = RationalMap::normalized(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0});
    DetectResult det = detect(sq);
    REQUIRE(!det.is_newton());
    CHECK(det.rejection->kind == RejectionKind::NonPositiveResidue);
    CHECK(std::abs(*det.rejection->location - Complex(1.0)) < 1e-9);
    CHECK(std::abs(*det.rejection->residue - Complex(-1.0)) < 1e-9);

    // infinity not fixed: equal degrees
    RationalMap moeb2 = RationalMap::normalized(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 0.0, 2.0});
    DetectResult det2 = detect(moeb2);
    REQUIRE(!det2.is_newton());
    CHECK(det2.rejection->kind == RejectionKind::InfinityNotFixed);

    // multiple fixed point: higher order pole
    RationalMap dbl = RationalMap::normalized(Polynomial{1.0, -2.0, 2.0}, Polynomial{0.0, 1.0});
    DetectResult det3 = detect(dbl);
    REQUIRE(!det3.is_newton());
    CHECK(det3.rejection->kind == RejectionKind::HigherOrderPole);
    CHECK(det3.rejection->pole_order == 2);

    // degree < 2 is a precondition violation, not a rejection
    RationalMap aff = RationalMap::normalized(Polynomial{1.0, 2.0}, Polynomial{1.0});
    CHECK_THROWS_AS(detect(aff), DegenerateMap);
}

TEST_CASE("detect reports near-miss residues without accepting them") {
    // Newton-like map built from residues {1, 1 + off}: rejected, off > tol
    auto make_map = [](double off) {
        test_oracles::Coeffs fd{Complex(1.0)};
        std::vector<Complex> zs{Complex(-1.0), Complex(1.0)};
        for (Complex z : zs) fd = test_oracles::naive_mul(fd, {-z, Complex(1.0)});
        test_oracles::Coeffs fn(3, Complex(0.0));
        Complex res[2] = {Complex(1.0), Complex(1.0 + off)};
        for (int i = 0; i < 2; ++i) {
            test_oracles::Coeffs term{res[i]};
            for (int j = 0; j < 2; ++j)
                if (j != i) term = test_oracles::naive_mul(term, {-zs[j], Complex(1.0)});
            for (size_t t = 0; t < term.size(); ++t) fn[t] += term[t];
        }
        Polynomial fnp{fn};
        return RationalMap::normalized(fnp.times_z() - Polynomial{fd}, fnp);
    };

    NewtonOptions opts;  // integer_tol 1e-6
    DetectResult far = detect(make_map(0.3), opts);
    REQUIRE(!far.is_newton());
    CHECK(far.rejection->kind == RejectionKind::NonIntegerResidue);
    CHECK(!far.rejection->near_miss);
    CHECK(std::abs(*far.rejection->residue - Complex(1.3)) < 1e-6);

    DetectResult near = detect(make_map(5e-6), opts);
    REQUIRE(!near.is_newton());
    CHECK(near.rejection->kind == RejectionKind::NonIntegerResidue);
    CHECK(near.rejection->near_miss);

    DetectResult inside = detect(make_map(5e-7), opts);
    CHECK(inside.is_newton());
}

TEST_CASE("round trip detect(construct) on random certificates") {
    Rng rng(31);
    int tested = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto data = test_support::random_certificate(rng, 5, 3, 4);
        auto built = construct(data.roots, data.q);
        DetectResult det = detect(built.map);
        REQUIRE(det.is_newton());
        const auto& got = *det.certificate;
        const auto& want = built.certificate;
        REQUIRE(got.k == want.k);
        CHECK(got.n == want.n);
        CHECK(got.degree == want.degree);
        for (int i = 0; i < got.k; ++i) {
            CHECK(got.roots[i].m == want.roots[i].m);
            CHECK(std::abs(got.roots[i].z - want.roots[i].z) < 1e-7);
        }
        CHECK(approx_equal(got.q, want.q, 1e-7));
        ++tested;
    }
    CHECK(tested == 60);
}

TEST_CASE("multiplier law") {
    auto quad = construct(std::vector<Root>{{Complex(1.0), 1}, {Complex(-1.0), 1}}, Polynomial());
    MultiplierReport rep = validate_multipliers(quad.map, quad.certificate);
    CHECK(rep.ok);
    CHECK(rep.worst < 1e-10);

    // Newton map of (z-1)^2 is (z+1)/2 with multiplier 1/2 = (m-1)/m at m=2
    RationalMap moeb = RationalMap::normalized(Polynomial{1.0, 1.0}, Polynomial{2.0});
    NewtonCertificate cert;
    cert.roots = {{Complex(1.0), 2}};
    cert.k = 1;
    cert.n = 0;
    cert.degree = 1;
    MultiplierReport rep2 = validate_multipliers(moeb, cert);
    CHECK(rep2.ok);
    REQUIRE(rep2.entries.size() == 1);
    CHECK(std::abs(rep2.entries[0].multiplier - Complex(0.5)) < 1e-12);

    // z^2 with a bogus claim m=1 at z=1 fails with lambda = 2
    RationalMap sq = RationalMap::normalized(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0});
    NewtonCertificate bogus;
    bogus.roots = {{Complex(1.0), 1}};
    bogus.k = 1;
    bogus.n = 0;
    bogus.degree = 2;
    MultiplierReport rep3 = validate_multipliers(sq, bogus);
    CHECK(!rep3.ok);
    CHECK(rep3.worst == doctest::Approx(2.0));
    CHECK(std::abs(*rep3.worst_point - Complex(1.0)) < 1e-12);
}

TEST_CASE("infinity classification per the certificate") {
    auto quad = construct(std::vector<Root>{{Complex(1.0), 1}, {Complex(-1.0), 1}}, Polynomial());
    InfinityClassification c1 = classify_infinity(quad.certificate);
    CHECK(c1.kind == InfinityKind::repelling);
    CHECK(c1.multiplier == doctest::Approx(2.0));

    auto par = construct(std::vector<Root>{{Complex(0.0), 1}}, Polynomial::variable());
    InfinityClassification c2 = classify_infinity(par.certificate);
    CHECK(c2.kind == InfinityKind::parabolic);
    CHECK(c2.parabolic_multiplicity == 2);
    CHECK(c2.petal_count == 1);

    auto par2 = construct(std::vector<Root>{{Complex(1.0), 1}, {Complex(-1.0), 1}},
                          Polynomial{0.0, 0.0, 0.5});
    InfinityClassification c3 = classify_infinity(par2.certificate);
    CHECK(c3.kind == InfinityKind::parabolic);
    CHECK(c3.parabolic_multiplicity == 3);
    CHECK(c3.petal_count == 2);

    // measured multiplier at infinity agrees with m/(m-1)
    for (int m_total : {2, 3, 5}) {
        std::vector<Root> roots;
        Rng rng(40 + m_total);
        for (int i = 0; i < m_total; ++i) roots.push_back({Complex(-0.8 + 0.7 * i, 0.1 * i), 1});
        auto built = construct(roots, Polynomial());
        auto fps = fixed_points(built.map);
        REQUIRE(fps.back().location.is_infinity());
        double want = static_cast<double>(m_total) / (m_total - 1);
        CHECK(std::abs(*fps.back().multiplier - Complex(want)) < 1e-10);
    }
}

TEST_CASE("petal directions match the numerical escape directions") {
    auto par = construct(std::vector<Root>{{Complex(0.0), 1}}, Polynomial::variable());
    auto dirs = petal_directions(par.certificate);
    REQUIRE(dirs.size() == 1);
    CHECK(std::abs(dirs[0] - Complex(-1.0)) < 1e-12);
    Complex measured = test_oracles::measure_escape_direction(par.map, Complex(-10.0));
    CHECK(std::abs(test_support::wrap_angle(std::arg(measured) - std::arg(dirs[0]))) < 1e-2);

    // q = z^2/2 over p = z^2 - 1: petals at +/- i
    auto quartic = construct(std::vector<Root>{{Complex(1.0), 1}, {Complex(-1.0), 1}},
                             Polynomial{0.0, 0.0, 0.5});
    auto dirs2 = petal_directions(quartic.certificate);
    REQUIRE(dirs2.size() == 2);
    CHECK(std::abs(dirs2[0] - Complex(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(dirs2[1] - Complex(0.0, 1.0)) < 1e-12);
    Complex up = test_oracles::measure_escape_direction(quartic.map, Complex(0.0, 3.0), 400000);
    CHECK(test_support::wrap_angle(std::arg(up) - M_PI / 2.0) < 1e-2);

    // q = -z flips the single petal to +1
    auto flipped = construct(std::vector<Root>{{Complex(0.0), 1}},
                             Polynomial{0.0, -1.0});
    auto dirs3 = petal_directions(flipped.certificate);
    REQUIRE(dirs3.size() == 1);
    CHECK(std::abs(dirs3[0] - Complex(1.0)) < 1e-12);
    Complex out = test_oracles::measure_escape_direction(flipped.map, Complex(10.0));
    CHECK(std::abs(test_support::wrap_angle(std::arg(out))) < 1e-2);

    CHECK_THROWS_AS(petal_directions(construct(std::vector<Root>{{Complex(1.0), 1},
                                                                 {Complex(-1.0), 1}},
                                               Polynomial())
                                         .certificate),
                    NotParabolic);
}

TEST_CASE("petal directions on random parabolic certificates agree with escapes") {
    Rng rng(33);
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 12; ++trial) {
        auto data = test_support::random_certificate(rng, 3, 1, 3);
        Polynomial q = data.q;
        if (q.degree() < 1) continue;
        auto built = construct(data.roots, q);
        auto dirs = petal_directions(built.certificate);
        double far = 40.0 * (1.0 + built.certificate.max_root_modulus());
        bool used = false;
        for (Complex v : dirs) {
            Complex seed = far * v;
            Complex measured = test_oracles::measure_escape_direction(built.map, seed, 300000);
            double err = std::abs(test_support::wrap_angle(std::arg(measured) - std::arg(v)));
            CHECK(err < 1e-2);
            used = true;
        }
        if (used) ++checked;
    }
    CHECK(checked >= 12);
}
