#include <gtest/gtest.h>

#include "lbc/io/config.hpp"
#include "lbc/random.hpp"
#include "lbc/tduality.hpp"

using namespace lbc;

namespace {

Poly k() { return atom("k"); }

DualPair concrete_pair()
{
    return build_pair(2, TableSpec::zero(), TableSpec::explicit_terms({{Wedge{0, 1}, k()}}), TableSpec::zero());
}

InvariantSection unit(int n, Component c, int mu = 0)
{
    InvariantSection s = InvariantSection::zero(n);
    switch (c) {
    case Component::Xi: s.xi[mu] = Poly(1); break;
    case Component::Xiw: s.xiw = Poly(1); break;
    case Component::Alpha: s.alpha[mu] = Poly(1); break;
    case Component::Alphap: s.alphap = Poly(1); break;
    }
    return s;
}

InvariantSection random_section(Sampler& rng, int n)
{
    PolyShape shape{.max_terms = 2, .max_degree = 1, .atom_chance = 5};
    auto f = [&] { return rng.coin() ? rng.base_function(n, "y", shape) : Poly(); };
    InvariantSection s = InvariantSection::zero(n);
    for (int i = 0; i < n; ++i) {
        s.xi[i] = f();
        s.alpha[i] = f();
    }
    s.xiw = f();
    s.alphap = f();
    return s;
}

InvariantForm random_form(Sampler& rng, int n)
{
    PolyShape shape{.max_terms = 2, .max_degree = 1, .atom_chance = 5};
    InvariantForm w;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Wedge m;
        for (int b = 0; b < n; ++b)
            if (mask >> b & 1)
                m.push_back(b);
        if (rng.uniform(0, 2) == 0)
            w.alpha[m] = rng.base_function(n, "y", shape);
        if (rng.uniform(0, 2) == 0)
            w.beta[m] = rng.base_function(n, "y", shape);
    }
    return w;
}

} // namespace

TEST(DualPair, ConcreteFluxes)
{
    DualPair p = concrete_pair();
    DForm A = DForm::generator(p.E, 2);
    DForm dy12 = wedge(DForm::generator(p.E, 0), DForm::generator(p.E, 1));
    EXPECT_EQ(p.H, -(k() * wedge(A, dy12)));
    EXPECT_TRUE(p.Hhat.is_zero());
}

TEST(DualPair, TrivialPairIsSelfDual)
{
    DualPair p = build_pair(2, TableSpec::zero(), TableSpec::zero(), TableSpec::zero());
    EXPECT_TRUE(p.H.is_zero());
    EXPECT_TRUE(p.Hhat.is_zero());
}

TEST(DualPair, SymbolicPairsAreConsistent)
{
    for (int n = 1; n <= 3; ++n)
        EXPECT_NO_THROW(symbolic_pair(n));
}

TEST(DualPair, RelationViolationIsRejected)
{
    // dOmega must equal F ^ Fhat = dy1 dy2 dy3 dy4, but Omega = 0
    FormTerms F{{Wedge{0, 1}, Poly(1)}}, Fh{{Wedge{2, 3}, Poly(1)}};
    EXPECT_THROW(build_pair(4, TableSpec::explicit_terms(F), TableSpec::explicit_terms(Fh), TableSpec::zero()), Error);
    FormTerms bad{{Wedge{0, 1}, coord(3, "y")}};
    EXPECT_THROW(build_pair(3, TableSpec::explicit_terms(bad), TableSpec::zero(), TableSpec::zero()), Error);
}

TEST(DualPair, LoadsFromJson)
{
    DualPair p = io::pair_from_json(io::load_json(std::string(LBC_DATA_DIR) + "/pair.json"));
    EXPECT_EQ(p.n, 2);
    EXPECT_EQ(p.H, concrete_pair().H);
}

TEST(Psi, SwapsWindingAndMomentum)
{
    EXPECT_EQ(psi(unit(2, Component::Xiw)), unit(2, Component::Alphap));
    InvariantSection s = unit(2, Component::Xi) - unit(2, Component::Alpha, 1);
    EXPECT_EQ(psi(s), s);
    Sampler rng(51);
    for (int t = 0; t < 20; ++t) {
        InvariantSection a = random_section(rng, 3), b = random_section(rng, 3);
        EXPECT_EQ(psi(psi(a)), a);
        EXPECT_EQ(section_pairing(psi(a), psi(b)), section_pairing(a, b));
    }
}

TEST(TTransform, Values)
{
    InvariantForm one{{{Wedge{}, Poly(1)}}, {}};
    InvariantForm A{{}, {{Wedge{}, Poly(1)}}};
    EXPECT_EQ(t_transform(one), (InvariantForm{{}, {{Wedge{}, Poly(-1)}}}));
    EXPECT_EQ(t_transform(A), one);
    Sampler rng(52);
    for (int t = 0; t < 20; ++t) {
        InvariantForm w = random_form(rng, 2);
        InvariantForm tt = t_transform(t_transform(w));
        for (auto& c : w.alpha)
            EXPECT_EQ(tt.alpha.at(c.first), -c.second);
        for (auto& c : w.beta)
            EXPECT_EQ(tt.beta.at(c.first), -c.second);
    }
}

TEST(Clifford, BasicActions)
{
    DualPair p = concrete_pair();
    DForm A = DForm::generator(p.E, 2);
    EXPECT_EQ(clifford_act(unit(2, Component::Xiw), A), DForm::function(p.E, Poly(1)));
    EXPECT_EQ(clifford_act(unit(2, Component::Alphap), DForm::function(p.E, Poly(1))), A);
}

TEST(TheoremExamples, ConcretePairBracket)
{
    DualPair p = concrete_pair();
    InvariantSection s = unit(2, Component::Xiw), t = unit(2, Component::Xi);
    InvariantSection want = InvariantSection::zero(2);
    want.alpha[1] = -k();
    EXPECT_EQ(bracket_on_E(p, s, t), want);
    EXPECT_EQ(bracket_on_Ehat(p, psi(s), psi(t)), want);
    EXPECT_TRUE(verify_tduality_theorem(p, s, t).ok());
    EXPECT_EQ(section_pairing(unit(2, Component::Xiw), unit(2, Component::Alphap)), Poly(ratio(1, 2)));
}

TEST(TheoremExamples, CommuteAndDerived)
{
    DualPair p = concrete_pair();
    EXPECT_EQ(commute_sign(p), -1);
    InvariantForm dy1{{{Wedge{0}, Poly(1)}}, {}};
    EXPECT_TRUE(verify_commute(p, unit(2, Component::Xi), dy1, -1).ok());
    InvariantForm A{{}, {{Wedge{}, Poly(1)}}};
    EXPECT_TRUE(verify_intertwine(p, A).ok());

    // [[d_1, d_2]]_H . 1 = sum_k H_12k dx^k on a flat base with symbolic H
    auto cf = std::make_shared<Coframe>(3);
    DForm H(cf);
    H.add_term({0, 1, 2}, atom("H", {1, 2, 3}, {}, true));
    GSection d1{VectorField::frame(cf, 0), DForm(cf)}, d2{VectorField::frame(cf, 1), DForm(cf)};
    DForm one = DForm::function(cf, Poly(1));
    EXPECT_EQ(clifford_act(dorfman_bracket(H, d1, d2), one),
              atom("H", {1, 2, 3}, {}, true) * DForm::generator(cf, 2));
    EXPECT_TRUE(derived_bracket_residual(H, d1, d2, one, "").zero);
}

TEST(TheoremProperties, ExhaustiveInTwoDimensions)
{
    DualPair p = symbolic_pair(2);
    int sc = commute_sign(p);
    auto forms = monomial_forms(2, "c");
    for (Component x : all_components) {
        InvariantSection s = symbolic_section(2, x, "u");
        for (auto& w : forms) {
            EXPECT_TRUE(verify_commute(p, s, w, sc).ok());
            EXPECT_TRUE(verify_clifford(p, s, w).ok());
        }
        for (Component y : all_components) {
            InvariantSection t = symbolic_section(2, y, "v");
            CheckReport rep = verify_tduality_theorem(p, s, t);
            EXPECT_TRUE(rep.ok()) << component_name(x) << "/" << component_name(y) << ": "
                                  << rep.first_failure()->reduced;
            for (auto& w : forms)
                EXPECT_TRUE(derived_bracket_check(p, s, t, w).ok());
        }
    }
    for (auto& w : forms)
        EXPECT_TRUE(verify_intertwine(p, w).ok());
}

TEST(TheoremProperties, RandomSectionsOnSymbolicPairs)
{
    Sampler rng(53);
    for (int n = 1; n <= 2; ++n) {
        DualPair p = symbolic_pair(n);
        for (int t = 0; t < 6; ++t) {
            InvariantSection a = random_section(rng, n), b = random_section(rng, n);
            InvariantForm w = random_form(rng, n);
            EXPECT_TRUE(verify_tduality_theorem(p, a, b).ok());
            EXPECT_TRUE(verify_commute(p, a, w, -1).ok());
            EXPECT_TRUE(verify_clifford(p, a, w).ok());
            EXPECT_TRUE(verify_intertwine(p, w).ok());
            EXPECT_TRUE(derived_bracket_check(p, a, b, w).ok());
        }
    }
}
