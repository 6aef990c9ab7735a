#include <gtest/gtest.h>

#include "lbc/cdalg.hpp"
#include "lbc/random.hpp"
#include "lbc/sigma.hpp"

using namespace lbc;

namespace {

struct Flat3 : ::testing::Test {
    BracketSpec spec = darboux_spec(3, Flux::symbolic(3));
    CDStructure cd{spec};
    const JetSpace& s = spec.space;
    Poly p1 = s.u(0), p2 = s.u(1), p3 = s.u(2), x1 = s.u(3), x2 = s.u(4), x3 = s.u(5);
    Poly dx(int k) const { return s.u(s.position(k), 1); }
    Poly twisted_p1p2() const
    {
        Poly c;
        for (int k = 1; k <= 3; ++k)
            c -= atom("H", {1, 2, k}, {}, true) * dx(k);
        return c;
    }
};

GenSection section(int n, std::vector<Poly> xi, std::vector<Poly> alpha)
{
    GenSection g = GenSection::zero(n);
    for (std::size_t i = 0; i < xi.size(); ++i)
        g.xi[i] = xi[i];
    for (std::size_t i = 0; i < alpha.size(); ++i)
        g.alpha[i] = alpha[i];
    return g;
}

GenSection random_section(Sampler& rng, int n)
{
    PolyShape shape{.max_terms = 2, .max_degree = 1, .atom_chance = 5};
    GenSection g = GenSection::zero(n);
    for (int i = 0; i < n; ++i) {
        if (rng.coin())
            g.xi[i] = rng.base_function(n, "x", shape);
        if (rng.coin())
            g.alpha[i] = rng.base_function(n, "x", shape);
    }
    return g;
}

} // namespace

TEST_F(Flat3, DorfmanAndCourantValues)
{
    EXPECT_EQ(cd.dorfman(x1, p1), Poly(1));
    EXPECT_EQ(cd.dorfman(p1, p2), twisted_p1p2());
    EXPECT_EQ(cd.courant(x1, p1), Poly(1));
    EXPECT_EQ(cd.courant(p1, p2), twisted_p1p2());
    EXPECT_TRUE(cd.dorfman(cd.d(x1 * p2), p3).is_zero());
}

TEST_F(Flat3, PairingNormalization)
{
    EXPECT_TRUE(cd.pairing(x1, x2).is_zero());
    Poly f = p1 + dx(1);
    // the literal symmetrized sum is 2 f_(1) f = -4; the pairing satisfying axiom (2) is half of it
    EXPECT_EQ(cd.pairing_sum(f, f), Poly(-4));
    EXPECT_EQ(cd.pairing(f, f), Poly(-2));
    EXPECT_TRUE(check_weak_cd(cd, p1, dx(1), x1).items[1].raw_zero);
}

TEST_F(Flat3, SchwingerCoefficients)
{
    auto c = cd.schwinger_coefficients(p1, dx(1), 4);
    EXPECT_EQ(c[0], Poly(-1));
    for (int j = 1; j < 4; ++j)
        EXPECT_TRUE(c[j].is_zero());
    for (auto& v : cd.schwinger_coefficients(x1, x2, 3))
        EXPECT_TRUE(v.is_zero());
    // pointwise isotropic pair: (d_1, 0) and (0, dx^2)
    for (auto& v : cd.schwinger_coefficients(p1, dx(2), 3))
        EXPECT_TRUE(v.is_zero());
}

TEST_F(Flat3, NijenhuisReportsTheObservedFactor)
{
    EXPECT_TRUE(cd.nijenhuis(x1, x2, x3).is_zero());
    CheckReport rep = check_nijenhuis(cd, x1 * p2, p1 * x2 + dx(3), p3 * x1);
    if (!rep.ok())
        EXPECT_EQ(rep.facts.at("observed Jacobiator / d Nij"), "-1/2");
}

TEST(CdProperties, WeakAxiomsOnRandomTriples)
{
    Sampler rng(41);
    for (int n = 1; n <= 3; ++n) {
        BracketSpec spec = darboux_spec(n, Flux::symbolic(n));
        CDStructure cd(spec);
        PolyShape shape{.max_terms = 2, .max_degree = 2, .max_order = 2};
        for (int t = 0; t < 8; ++t) {
            DiffPoly f = rng.diffpoly(spec.space, shape), g = rng.diffpoly(spec.space, shape),
                     h = rng.diffpoly(spec.space, shape);
            CheckReport rep = check_weak_cd(cd, f, g, h);
            for (auto& r : rep.items) {
                EXPECT_TRUE(r.zero) << r.identity << " on " << r.sample << ": " << r.reduced;
                if (r.identity.rfind("(2)", 0) == 0 || r.identity.rfind("(3)", 0) == 0)
                    EXPECT_TRUE(r.raw_zero) << r.identity;
            }
            EXPECT_EQ(cd.pairing(f, g), cd.pairing(g, f));
            EXPECT_EQ(cd.courant(f, g), -cd.courant(g, f));
        }
    }
}

TEST(CdProperties, SchwingerMatchesTaylorCoefficients)
{
    Sampler rng(42);
    BracketSpec spec = darboux_spec(2, Flux::symbolic(2));
    CDStructure cd(spec);
    for (int t = 0; t < 20; ++t) {
        DiffPoly f = rng.diffpoly(spec.space), g = rng.diffpoly(spec.space);
        EXPECT_TRUE(check_schwinger(cd, f, g, 6).zero);
    }
}

// ---------------------------------------------------------------------------
// generalized tangent bundle

TEST(Sections, SectionFunctions)
{
    JetSpace s = JetSpace::darboux(2);
    Poly x2 = coord(2, "x"), f = atom("f");
    EXPECT_EQ(as_function(section(2, {Poly(1)}, {}), s), s.u(0));
    EXPECT_EQ(as_function(section(2, {}, {Poly(1)}), s), s.u(2, 1));
    EXPECT_EQ(as_function(section(2, {x2}, {Poly(), f}), s), s.u(3) * s.u(0) + f * s.u(3, 1));
}

TEST(Sections, GeometricDorfman)
{
    Flux H = Flux::symbolic(3);
    auto Hsum = [](Poly scale) {
        std::vector<Poly> a(3);
        for (int k = 1; k <= 3; ++k)
            a[k - 1] = scale * atom("H", {1, 2, k}, {}, true);
        return a;
    };
    GenSection d1 = section(3, {Poly(1)}, {}), d2 = section(3, {Poly(), Poly(1)}, {});
    GenSection r = geometric_dorfman(d1, d2, H);
    EXPECT_EQ(r, section(3, {}, Hsum(Poly(1))));
    Poly x2 = coord(2, "x");
    GenSection r2 = geometric_dorfman(section(3, {x2}, {}), d2, H);
    EXPECT_EQ(r2, section(3, {Poly(-1)}, Hsum(x2)));
    GenSection a = section(3, {}, {Poly(1)}), b = section(3, {}, {Poly(), Poly(1)});
    EXPECT_EQ(geometric_dorfman(a, b, H), GenSection::zero(3));
}

TEST(Sections, Pairing)
{
    GenSection s = section(2, {Poly(1)}, {Poly(1)});
    EXPECT_EQ(geometric_pairing(s, s), Poly(1));
    EXPECT_EQ(geometric_pairing(section(2, {Poly(1)}, {}), section(2, {}, {Poly(1)})), Poly(ratio(1, 2)));
    EXPECT_TRUE(geometric_pairing(section(2, {Poly(1)}, {}), section(2, {Poly(), Poly(1)}, {})).is_zero());
}

TEST(Sections, SigmaIsMinusOne)
{
    for (int n = 1; n <= 3; ++n)
        EXPECT_EQ(detect_sigma(darboux_spec(n, Flux::symbolic(n))), -1);
}

TEST(Sections, CorrespondenceExamples)
{
    Flux H = Flux::symbolic(3);
    GenSection d2 = section(3, {Poly(), Poly(1)}, {});
    EXPECT_TRUE(verify_correspondence(section(3, {Poly(1)}, {}), d2, H, -1).ok());
    EXPECT_TRUE(verify_correspondence(section(3, {coord(2, "x")}, {}), d2, H, -1).ok());
}

TEST(SectionProperties, CorrespondenceOnRandomSections)
{
    Sampler rng(43);
    for (int n = 1; n <= 3; ++n) {
        Flux H = Flux::symbolic(n);
        JetSpace space = JetSpace::darboux(n);
        for (int t = 0; t < 10; ++t) {
            GenSection a = random_section(rng, n), b = random_section(rng, n);
            CheckReport rep = verify_correspondence(a, b, H, -1);
            EXPECT_TRUE(rep.items[0].raw_zero) << to_string(a) << " ; " << to_string(b) << ": " << rep.items[0].raw;
            EXPECT_TRUE(rep.ok()) << rep.first_failure()->identity;
            Poly c(rng.rational());
            EXPECT_EQ(as_function(a + c * b, space), as_function(a, space) + c * as_function(b, space));
        }
    }
}
