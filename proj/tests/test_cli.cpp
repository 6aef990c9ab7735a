#include <gtest/gtest.h>

#include <sstream>

#include "ast_gen.hpp"
#include "lbc/cli/run.hpp"
#include "lbc/io/eval.hpp"
#include "lbc/io/parse.hpp"
#include "lbc/io/print.hpp"

using namespace lbc;

namespace {

const std::string data = LBC_DATA_DIR;

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Parser, ProductOfJets)
{
    AstPtr t = io::parse("p1 * d(x1)");
    ASSERT_EQ(t->kind, Ast::Kind::Mul);
    EXPECT_EQ(t->args[0]->kind, Ast::Kind::Ident);
    EXPECT_EQ(t->args[1]->kind, Ast::Kind::Deriv);
    JetSpace s = JetSpace::darboux(1);
    EXPECT_EQ(io::read_diffpoly("p1 * d(x1)", s), s.u(0) * s.u(1, 1));
    EXPECT_EQ(io::read_diffpoly("d2(p1)", s), s.u(0, 2));
}

TEST(Parser, AtomIndicesAreKeptAsWritten)
{
    AstPtr t = io::parse("H[2,1,3]");
    EXPECT_EQ(t->indices, (std::vector<int>{2, 1, 3}));
    EXPECT_EQ(io::read_coefficient("H[2,1,3]", 3), -atom("H", {1, 2, 3}, {}, true));
    EXPECT_EQ(io::read_coefficient("D1 D2 f[x]", 3), atom("f", {}, {1, 2}));
}

TEST(Parser, ErrorPositions)
{
    try {
        io::parse("p1 +");
        FAIL() << "no error";
    } catch (const Error& e) {
        EXPECT_EQ(e.column(), 5);
        EXPECT_EQ(e.line(), 1);
    }
    try {
        io::parse("p1\n  * )");
        FAIL() << "no error";
    } catch (const Error& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 5);
    }
    EXPECT_THROW(io::parse("p1 $ 2"), Error);
    EXPECT_THROW(io::read_diffpoly("q7", JetSpace::darboux(1)), Error);
    EXPECT_THROW(io::read_diffpoly("p1 / x1", JetSpace::darboux(1)), Error);
}

TEST(Parser, Sections)
{
    GenSection s = io::read_gensection("sec(xi=[x2, 0], alpha=[0, f[x]])", 2);
    EXPECT_EQ(s.xi[0], coord(2, "x"));
    EXPECT_EQ(s.alpha[1], atom("f"));
    InvariantSection t = io::read_invsection("sec(xiw=1, alpha=[y1, 0])", 2);
    EXPECT_EQ(t.xiw, Poly(1));
    EXPECT_EQ(t.alpha[0], coord(1, "y"));
    EXPECT_THROW(io::read_gensection("sec(xi=[1])", 2), Error);
    EXPECT_THROW(io::read_gensection("sec(xi=[1, 0], xi=[0, 1])", 2), Error);
}

TEST(Parser, Forms)
{
    DualPair p = symbolic_pair(2);
    DForm w = io::read_form("y1 * dy2 * A + d(y1^2)", p.E);
    DForm want = coord(1, "y") * wedge(DForm::generator(p.E, 1), DForm::generator(p.E, 2)) +
                 Poly(2) * coord(1, "y") * DForm::generator(p.E, 0);
    EXPECT_EQ(w, want);
    EXPECT_EQ(io::read_form("wedge(dy1, dy2)", p.E), -io::read_form("dy2 * dy1", p.E));
}

TEST(Printer, TextRoundTrip)
{
    JetSpace s = JetSpace::darboux(2);
    Poly f = s.u(0) * s.u(2, 1) * ratio(-3, 2) + atom("H", {1, 2}, {1}, true) * s.u(1, 2) + Poly(7);
    EXPECT_EQ(io::read_diffpoly(to_string(f), s), f);
}

TEST(Printer, Latex)
{
    JetSpace s = JetSpace::darboux(1);
    EXPECT_EQ(io::latex::poly(s.u(0) * s.u(1, 1)), "p_{1}\\partial x^{1}");
    EXPECT_EQ(io::latex::poly(s.u(0) * ratio(1, 2) - Poly(1)), "-1 + \\frac{1}{2} p_{1}");
}

TEST(Printer, Json)
{
    LambdaPoly v(std::vector<Poly>{Poly(), Poly(-1)});
    EXPECT_EQ(io::to_json(v).dump(), R"({"lambda":[{"0":"0"},{"1":"-1"}]})");
    CheckReport rep;
    rep.items.push_back({"x", "s", "0", "0", true, true});
    io::json j = io::to_json(rep);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["ok"], true);
}

TEST(Cli, CheckPvaClosed)
{
    Outcome r = run({"check-pva", "--dim", "3", "--flux", data + "/H3.json", "--closed"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, CheckPvaObstruction)
{
    Outcome r = run({"check-pva", "--dim", "4", "--flux", data + "/H4.json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("first failure: Jacobi"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("D4 H[1,2,3]"), std::string::npos) << r.out;
    Outcome closed = run({"check-pva", "--dim", "4", "--flux", data + "/H4.json", "--closed"});
    EXPECT_EQ(closed.code, 0);
    EXPECT_NE(closed.out.find("raw obstruction"), std::string::npos);
}

TEST(Cli, Tdualize)
{
    Outcome r = run({"tdualize", "--pair", data + "/pair.json", "--check", "theorem", "--left", "sec(xiw=1)", "--right",
                 "sec(xi=[1, 0])"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("alpha=[0, -k[x]]"), std::string::npos) << r.out;
}

TEST(Cli, AsBracketReportsSigma)
{
    Outcome r = run({"as-bracket", "--dim", "2", "--left", "sec(xi=[1, 0], alpha=[1, 0])", "--right",
                 "sec(xi=[0, x1], alpha=[0, 0])"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("sigma = -1"), std::string::npos);
}

TEST(Cli, QuantizeAndOracle)
{
    EXPECT_EQ(run({"quantize", "--basis", data + "/heisenberg.json", "--word", "p2 p1"}).code, 0);
    EXPECT_EQ(run({"oracle", "--dim", "2", "--samples", "4"}).code, 0);
    EXPECT_EQ(run({"derive-cd", "--dim", "2", "--left", "p1 + d(x1)", "--right", "p1 + d(x1)"}).code, 0);
}

TEST(Cli, BadInput)
{
    EXPECT_EQ(run({"check-pva", "--bogus"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"check-pva", "--dim", "3", "--flux", data + "/missing.json"}).code, 2);
    EXPECT_EQ(run({"--format", "yaml", "oracle", "--dim", "1"}).code, 2);
    EXPECT_EQ(run({"tdualize", "--pair", data + "/pair.json", "--check", "nonsense"}).code, 2);
}

TEST(Cli, JsonReportsAreDeterministic)
{
    std::vector<std::string> args{"--format", "json", "--seed", "7", "derive-cd", "--dim", "2", "--samples", "3"};
    Outcome a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    io::json j = io::json::parse(a.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["checked"], 15);
}

TEST(Parser, SourceRoundTrip)
{
    Sampler rng(71);
    for (int t = 0; t < 500; ++t) {
        AstPtr a = lbc::testing::random_ast(rng, 4);
        std::string src = io::to_source(*a);
        AstPtr b = io::parse(src);
        EXPECT_TRUE(same_tree(*a, *b)) << src << " -> " << io::to_source(*b);
    }
}
