#include <gtest/gtest.h>

#include "lbc/forms.hpp"
#include "lbc/random.hpp"
#include "lbc/sigma.hpp"

using namespace lbc;

namespace {

DForm random_form(Sampler& rng, const CoframePtr& cf, int max_deg)
{
    DForm a(cf);
    PolyShape shape{.max_terms = 2, .max_degree = 2};
    int terms = rng.uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
        DForm m = DForm::function(cf, rng.base_function(cf->base_dim(), cf->coord_prefix(), shape));
        int deg = rng.uniform(0, max_deg);
        for (int d = 0; d < deg; ++d)
            m = wedge(m, DForm::generator(cf, rng.uniform(0, cf->size() - 1)));
        a += m;
    }
    return a;
}

VectorField random_field(Sampler& rng, const CoframePtr& cf)
{
    VectorField v(cf);
    PolyShape shape{.max_terms = 2, .max_degree = 1};
    for (int g = 0; g < cf->size(); ++g)
        if (rng.coin())
            v.add(g, rng.base_function(cf->base_dim(), cf->coord_prefix(), shape));
    return v;
}

/// Coframe of a circle bundle over R^2 with connection A, dA = F[1,2] dy1 dy2.
CoframePtr circle_bundle()
{
    auto cf = std::make_shared<Coframe>(2);
    cf->relations().add_closed("F", 2);
    cf->add_generator("A", {{Wedge{0, 1}, atom("F", {1, 2}, {}, true)}});
    return cf;
}

} // namespace

TEST(Forms, WedgeSignsAndSquares)
{
    auto cf = base_coframe(3);
    DForm dx1 = DForm::generator(cf, 0), dx2 = DForm::generator(cf, 1);
    EXPECT_EQ(wedge(dx1, dx2), -wedge(dx2, dx1));
    EXPECT_TRUE(wedge(dx1, dx1).is_zero());
    EXPECT_EQ(to_string(wedge(dx2, dx1)), "-dx1*dx2");
}

TEST(Forms, ExteriorDerivativeOfFunctions)
{
    auto cf = base_coframe(2);
    Poly x1 = cf->coord(1), x2 = cf->coord(2);
    DForm f = DForm::function(cf, x1 * x1 * x2);
    // d(x1^2 x2) = 2 x1 x2 dx1 + x1^2 dx2
    DForm want = Rational(2) * x1 * x2 * DForm::generator(cf, 0) + x1 * x1 * DForm::generator(cf, 1);
    EXPECT_EQ(exterior_derivative(f), want);
}

TEST(Forms, CurvatureOfTheConnection)
{
    auto cf = circle_bundle();
    DForm A = DForm::generator(cf, cf->index_of("A"));
    DForm F = atom("F", {1, 2}, {}, true) * wedge(DForm::generator(cf, 0), DForm::generator(cf, 1));
    EXPECT_EQ(exterior_derivative(A), F);
    EXPECT_TRUE(exterior_derivative(F).is_zero());
}

TEST(Forms, ContractionOnFrame)
{
    auto cf = base_coframe(3);
    DForm w = wedge(DForm::generator(cf, 0), wedge(DForm::generator(cf, 1), DForm::generator(cf, 2)));
    VectorField e2 = VectorField::frame(cf, 1);
    // i_{d2}(dx1 dx2 dx3) = -dx1 dx3
    EXPECT_EQ(contract(e2, w), -wedge(DForm::generator(cf, 0), DForm::generator(cf, 2)));
}

TEST(Forms, DorfmanBracketWithoutFlux)
{
    auto cf = base_coframe(2);
    GSection s{VectorField::frame(cf, 0), DForm(cf)};
    GSection t{VectorField(cf), cf->coord(1) * DForm::generator(cf, 1)};
    GSection r = dorfman_bracket(DForm(cf), s, t);
    EXPECT_TRUE(r.v.is_zero());
    EXPECT_EQ(r.a, DForm::generator(cf, 1));
}

TEST(Forms, PairingIsHalfTheSymmetricContraction)
{
    auto cf = base_coframe(2);
    GSection s{VectorField::frame(cf, 0), DForm(cf)};
    GSection t{VectorField(cf), DForm::generator(cf, 0)};
    EXPECT_EQ(section_pairing(s, t), Poly(ratio(1, 2)));
}

TEST(FormsProperties, CartanCalculus)
{
    Sampler rng(21);
    for (int n = 1; n <= 3; ++n) {
        for (CoframePtr cf : {base_coframe(n), n == 2 ? circle_bundle() : base_coframe(n)}) {
            for (int trial = 0; trial < 15; ++trial) {
                DForm a = random_form(rng, cf, 2), b = random_form(rng, cf, 2);
                VectorField X = random_field(rng, cf), Y = random_field(rng, cf);
                EXPECT_TRUE(exterior_derivative(exterior_derivative(a)).is_zero()) << a;
                // graded Leibniz, checked per homogeneous part
                for (int p = 0; p <= a.max_degree(); ++p) {
                    DForm ap = a.part(p);
                    Poly sg(Rational(p % 2 ? -1 : 1));
                    EXPECT_EQ(exterior_derivative(wedge(ap, b)),
                              wedge(exterior_derivative(ap), b) + sg * wedge(ap, exterior_derivative(b)));
                    EXPECT_EQ(contract(X, wedge(ap, b)), wedge(contract(X, ap), b) + sg * wedge(ap, contract(X, b)));
                }
                EXPECT_TRUE(contract(X, contract(X, a)).is_zero());
                EXPECT_EQ(contract(X, contract(Y, a)), -contract(Y, contract(X, a)));
                // [L_X, i_Y] = i_[X,Y] and [L_X, d] = 0
                EXPECT_EQ(lie_derivative(X, contract(Y, a)) - contract(Y, lie_derivative(X, a)),
                          contract(lie_bracket(X, Y), a));
                EXPECT_EQ(exterior_derivative(lie_derivative(X, a)), lie_derivative(X, exterior_derivative(a)));
                EXPECT_EQ(lie_bracket(X, Y), -lie_bracket(Y, X));
            }
        }
    }
}

TEST(FormsProperties, WedgeIsGradedCommutative)
{
    Sampler rng(22);
    auto cf = base_coframe(3);
    for (int trial = 0; trial < 30; ++trial) {
        DForm a = random_form(rng, cf, 2), b = random_form(rng, cf, 2), c = random_form(rng, cf, 1);
        EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
        for (int p = 0; p <= a.max_degree(); ++p)
            for (int q = 0; q <= b.max_degree(); ++q) {
                DForm ap = a.part(p), bq = b.part(q);
                EXPECT_EQ(wedge(ap, bq), Poly(Rational((p * q) % 2 ? -1 : 1)) * wedge(bq, ap));
            }
    }
}

TEST(FormsProperties, TwistedDifferentialSquaresToZero)
{
    Sampler rng(23);
    auto cf = base_coframe(3);
    Poly h = atom("h");
    DForm H = h * wedge(DForm::generator(cf, 0), wedge(DForm::generator(cf, 1), DForm::generator(cf, 2)));
    for (int trial = 0; trial < 20; ++trial) {
        DForm a = random_form(rng, cf, 3);
        EXPECT_TRUE(twisted_derivative(H, twisted_derivative(H, a)).is_zero());
    }
}
