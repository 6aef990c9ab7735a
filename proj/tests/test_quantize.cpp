#include <gtest/gtest.h>

#include "lbc/io/config.hpp"
#include "lbc/quantize.hpp"
#include "lbc/random.hpp"

using namespace lbc;

namespace {

ConformalBasis load(const char* file)
{
    return io::basis_from_json(io::load_json(std::string(LBC_DATA_DIR) + "/" + file));
}

BracketSpec constant_flux(int n, int h)
{
    return darboux_spec(n, Flux::explicit_entries(n, {{{1, 2, 3}, Poly(h)}}));
}

} // namespace

TEST(LieBracket, Values)
{
    BracketSpec spec = darboux_spec(3, Flux::symbolic(3));
    const JetSpace& s = spec.space;
    EXPECT_TRUE(lie_bracket(s.u(3), s.u(0), spec).is_zero());
    Poly a = s.u(0) + s.u(3, 1);
    EXPECT_TRUE(lie_bracket(a, a, spec).is_zero());
    Poly c;
    for (int k = 1; k <= 3; ++k)
        c -= atom("H", {1, 2, k}, {}, true) * s.u(s.position(k), 1);
    EXPECT_EQ(lie_bracket(s.u(0), s.u(1), spec), spec.relations.reduce(total_derivative(c, s)));
}

TEST(LieBracket, HigherCoefficientsIntegrate)
{
    BracketSpec spec = darboux_spec(1, Flux::zero(1));
    const JetSpace& s = spec.space;
    Poly x = s.u(1), p = s.u(0);
    // {x^2 l p} = 2x, so [x^2, p] = d(2x)
    EXPECT_EQ(lie_bracket(x * x, p, spec), Poly(2) * s.u(1, 1));
    // {x dx l p} = -lambda x; integrating over [-d, 0] gives d^2 x / 2
    EXPECT_EQ(lambda_bracket(x * s.u(1, 1), p, spec), LambdaPoly(std::vector<Poly>{Poly(), -x}));
    EXPECT_EQ(lie_bracket(x * s.u(1, 1), p, spec), s.u(1, 2) * ratio(1, 2));
}

TEST(HbarFamily, ScalesEveryEntry)
{
    BracketSpec spec = darboux_spec(2, Flux::symbolic(2));
    BracketSpec q = hbar_family(spec);
    const JetSpace& s = spec.space;
    EXPECT_EQ(lambda_bracket(s.u(2), s.u(0), q), LambdaPoly(hbar()));
    EXPECT_EQ(lambda_bracket(s.u(2), s.u(0), hbar_family(q)), LambdaPoly(hbar() * hbar()));
    Sampler rng(61);
    for (int t = 0; t < 10; ++t) {
        DiffPoly f = rng.diffpoly(s), g = rng.diffpoly(s);
        LambdaPoly v = lambda_bracket(f, g, q);
        for (auto& c : v.coefficients())
            if (!c.is_zero())
                EXPECT_GE(hbar_degree(c), 1);
    }
}

TEST(HbarFamily, JacobiatorIsOfOrderHbarSquared)
{
    BracketSpec q = hbar_family(darboux_spec(2, Flux::symbolic(2)));
    Sampler rng(62);
    for (int t = 0; t < 5; ++t) {
        DiffPoly f = rng.diffpoly(q.space), g = rng.diffpoly(q.space), h = rng.diffpoly(q.space);
        EXPECT_TRUE(jacobiator(f, g, h, q).is_zero());
        LambdaPoly v = lambda_bracket(f, lambda_bracket(g, h, q).coeff(0), q);
        for (auto& c : v.coefficients())
            if (!c.is_zero())
                EXPECT_GE(hbar_degree(c), 2);
    }
}

TEST(Basis, OrderAndSpan)
{
    ConformalBasis B = load("heisenberg.json");
    ASSERT_EQ(B.size(), 4);
    EXPECT_EQ(B.element(0).name, "w3");
    EXPECT_EQ(B.element(1).name, "d(w3)");
    EXPECT_EQ(B.element(2).name, "p1");
    EXPECT_EQ(B.element(3).name, "p2");
    auto [c0, c] = B.coordinates(B.lie(3, 2));
    EXPECT_EQ(c0, 0);
    EXPECT_EQ(c[1], 2);
}

TEST(Basis, EscapingTheSpanIsAnError)
{
    ConformalBasis B(constant_flux(3, 2));
    B.add_generator("p1", B.spec().space.u(0));
    B.add_generator("p2", B.spec().space.u(1));
    EXPECT_THROW(B.validate(), Error);
    EXPECT_THROW(B.coordinates(B.spec().space.u(5)), Error);
}

TEST(Pbw, NormalForms)
{
    ConformalBasis H = load("heisenberg.json");
    int w = H.index_of("d(w3)"), p1 = H.index_of("p1"), p2 = H.index_of("p2");
    EnvElement nf = pbw_normal_form(Word{p2, p1}, H);
    EnvElement want(Word{p1, p2});
    want.add({w}, Poly(2) * hbar());
    EXPECT_EQ(nf, want);
    EXPECT_EQ(pbw_normal_form(Word{p1, p2}, H), EnvElement(Word{p1, p2}));

    ConformalBasis F = load("flat_basis.json");
    int x1 = F.index_of("x1"), q1 = F.index_of("p1");
    EXPECT_EQ(pbw_normal_form(Word{q1, x1}, F), EnvElement(Word{x1, q1}));
    SymElement lim = quasiclassical_limit(pbw_normal_form(Word{q1, x1}, F));
    EXPECT_EQ(lim, (SymElement{{Word{x1, q1}, Rational(1)}}));
}

TEST(Pbw, BothRewritePathsAgree)
{
    ConformalBasis H = load("heisenberg.json");
    int a = H.index_of("d(w3)"), b = H.index_of("p1"), c = H.index_of("p2");
    Word w{c, b, a};
    EXPECT_EQ(pbw_normal_form(w, H, {}, RewriteStrategy::Leftmost), pbw_normal_form(w, H, {}, RewriteStrategy::Rightmost));
}

TEST(Pbw, TruncationEscapes)
{
    ConformalBasis H = load("heisenberg.json");
    EXPECT_THROW(pbw_normal_form(Word{3, 2, 1, 0}, H), Error);
    Truncation tight{3, 0};
    EXPECT_THROW(pbw_normal_form(Word{3, 2}, H, tight), Error);
}

TEST(Limit, HbarOnlyTermsVanish)
{
    ConformalBasis H = load("heisenberg.json");
    EnvElement e(Word{1}, hbar());
    EXPECT_TRUE(quasiclassical_limit(e).empty());
    EXPECT_EQ(recovered_bracket(3, 2, H), H.lie(3, 2));
}

TEST(QuasiCommutativity, Examples)
{
    ConformalBasis F = load("flat_basis.json");
    EXPECT_TRUE(check_quasi_commutativity(0, 1, 2, F).zero);
    ConformalBasis H = load("heisenberg.json");
    EXPECT_TRUE(check_quasi_commutativity(2, 2, 3, H).zero);
    EXPECT_TRUE(check_quasi_commutativity(3, 2, 0, H).zero);
}

TEST(QuantizeSuites, ShippedBases)
{
    for (const char* file : {"heisenberg.json", "heisenberg_alt.json", "flat_basis.json"}) {
        ConformalBasis B = load(file);
        for (const CheckReport& rep :
             {check_lie(B), check_pbw(B, 3), check_limit(B, 3), check_quasi_commutativity(B)})
            EXPECT_TRUE(rep.ok()) << file << ": " << rep.first_failure()->identity << " on "
                                  << rep.first_failure()->sample;
    }
}
