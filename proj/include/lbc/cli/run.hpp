#pragma once

// Command-line surface. Exit status: 0 when every requested residual is
// zero, 1 when one is not (the first failure is printed), 2 on bad flags or
// unreadable input.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lbc/cdalg.hpp"
#include "lbc/io/config.hpp"
#include "lbc/io/print.hpp"
#include "lbc/oracle/delta.hpp"
#include "lbc/random.hpp"

namespace lbc::cli {

struct Common {
    std::string format;
    std::uint64_t seed = 1;
};

namespace detail {

inline io::Format format_of(const Common& c)
{
    if (!c.format.empty())
        return io::parse_format(c.format);
    if (const char* env = std::getenv("LBC_FORMAT"))
        return io::parse_format(env);
    return io::Format::Text;
}

/// Records the first residual that needed the declared relations to vanish.
inline void note_raw_obstruction(CheckReport& rep)
{
    for (auto& r : rep.items)
        if (!r.raw_zero && r.zero) {
            rep.facts["raw obstruction (" + r.identity + ")"] = r.raw;
            rep.facts["raw obstruction sample"] = r.sample;
            return;
        }
}

inline int finish(const CheckReport& rep, io::Format f, const std::string& title, std::ostream& out)
{
    out << io::render(rep, f, title);
    if (f == io::Format::Json)
        out << "\n";
    return rep.ok() ? 0 : 1;
}

inline BracketSpec load_spec(int dim, const std::string& flux, const std::string& spec_file, bool closed)
{
    if (!spec_file.empty())
        return io::spec_from_json(io::load_json(spec_file));
    if (dim < 1)
        throw lbc::Error("--dim is required");
    Flux H = flux.empty() ? Flux::symbolic(dim, closed) : io::flux_from_json(io::load_json(flux), closed);
    if (H.dim() != dim)
        throw lbc::Error("flux file has dimension " + std::to_string(H.dim()) + ", --dim is " + std::to_string(dim));
    return darboux_spec(dim, H);
}

inline std::vector<DiffPoly> generators(const JetSpace& s)
{
    std::vector<DiffPoly> g;
    for (int i = 0; i < s.size(); ++i)
        g.push_back(s.u(i));
    return g;
}

} // namespace detail

struct PvaArgs {
    int dim = 0;
    std::string flux, spec;
    bool closed = false;
    int samples = 0;
    int max_lambda = 8;
};

inline int check_pva(const PvaArgs& a, const Common& c, std::ostream& out)
{
    BracketSpec spec = detail::load_spec(a.dim, a.flux, a.spec, a.closed);
    spec.max_lambda_degree = a.max_lambda;
    std::vector<DiffPoly> sample = detail::generators(spec.space);
    Sampler rng(c.seed);
    PolyShape shape;
    shape.max_order = 1;
    for (int i = 0; i < a.samples; ++i)
        sample.push_back(rng.diffpoly(spec.space, shape));
    CheckReport rep = check_axiom_suite(spec, sample);
    detail::note_raw_obstruction(rep);
    return detail::finish(rep, detail::format_of(c), "PVA axioms", out);
}

struct CdArgs {
    int dim = 0;
    std::string flux;
    bool closed = true;
    std::string left, right;
    int samples = 0;
};

inline int derive_cd(const CdArgs& a, const Common& c, std::ostream& out)
{
    BracketSpec spec = detail::load_spec(a.dim, a.flux, "", a.closed);
    CDStructure cd(spec);
    io::Format f = detail::format_of(c);
    if (!a.left.empty() || !a.right.empty()) {
        if (a.left.empty() || a.right.empty())
            throw lbc::Error("--left and --right go together");
        DiffPoly x = io::read_diffpoly(a.left, spec.space), y = io::read_diffpoly(a.right, spec.space);
        DiffPoly dor = spec.relations.reduce(cd.dorfman(x, y));
        DiffPoly pr = spec.relations.reduce(cd.pairing(x, y));
        DiffPoly cou = spec.relations.reduce(cd.courant(x, y));
        if (f == io::Format::Json) {
            io::json j{{"schema", 1},
                       {"dorfman", io::to_json(dor)},
                       {"pairing", io::to_json(pr)},
                       {"courant", io::to_json(cou)}};
            out << j.dump(2) << "\n";
        } else {
            out << "[[f,g]] = " << io::render(dor, f) << "\n";
            out << "<f,g> = " << io::render(pr, f) << "\n";
            out << "[f,g]_C = " << io::render(cou, f) << "\n";
        }
    }
    if (a.samples <= 0)
        return 0;
    Sampler rng(c.seed);
    std::vector<std::tuple<DiffPoly, DiffPoly, DiffPoly>> triples;
    for (int i = 0; i < a.samples; ++i) {
        DiffPoly x = rng.diffpoly(spec.space), y = rng.diffpoly(spec.space), z = rng.diffpoly(spec.space);
        triples.emplace_back(x, y, z);
    }
    return detail::finish(check_weak_cd(cd, triples), f, "weak Courant-Dorfman axioms", out);
}

struct AsArgs {
    int dim = 0;
    std::string flux;
    bool closed = true;
    std::string left, right;
};

inline int as_bracket(const AsArgs& a, const Common& c, std::ostream& out)
{
    if (a.left.empty() || a.right.empty())
        throw lbc::Error("--left and --right are required");
    BracketSpec spec = detail::load_spec(a.dim, a.flux, "", a.closed);
    Flux H = a.flux.empty() ? Flux::symbolic(a.dim, a.closed) : io::flux_from_json(io::load_json(a.flux), a.closed);
    GenSection s = io::read_gensection(a.left, a.dim), t = io::read_gensection(a.right, a.dim);
    io::Format f = detail::format_of(c);
    DiffPoly fs = as_function(s, spec.space), ft = as_function(t, spec.space);
    LambdaPoly lam = lambda_bracket(fs, ft, spec).map([&](const Poly& x) { return spec.relations.reduce(x); });
    GenSection geo = geometric_dorfman(s, t, H);
    Poly pair = geometric_pairing(s, t);
    int sigma = detect_sigma(spec);
    if (f == io::Format::Json) {
        io::json j{{"schema", 1},         {"f_s", io::to_json(fs)},   {"f_t", io::to_json(ft)},
                   {"bracket", io::to_json(lam)}, {"dorfman", io::to_json(geo)}, {"pairing", to_string(pair)},
                   {"sigma", sigma}};
        out << j.dump(2) << "\n";
    } else {
        out << "f_s = " << io::render(fs, f) << "\n";
        out << "f_t = " << io::render(ft, f) << "\n";
        out << "{f_s lambda f_t} = " << io::render(lam, f) << "\n";
        out << "[[s,t]]_H = " << io::render(geo, f) << "\n";
        out << "<s,t> = " << io::render(pair, f) << "\n";
        out << "sigma = " << sigma << "\n";
    }
    CheckReport rep = verify_correspondence(s, t, H, sigma);
    if (f == io::Format::Json)
        return rep.ok() ? 0 : (out << io::render(rep, f, "section correspondence") << "\n", 1);
    return detail::finish(rep, f, "section correspondence", out);
}

struct TdArgs {
    int base_dim = 0;
    std::string pair;
    std::string check = "all";
    std::string left, right;
};

inline int tdualize(const TdArgs& a, const Common& c, std::ostream& out)
{
    if (a.pair.empty())
        throw lbc::Error("--pair is required");
    static const std::vector<std::string> checks{"intertwine", "commute", "clifford", "derived", "theorem", "all"};
    if (std::find(checks.begin(), checks.end(), a.check) == checks.end())
        throw lbc::Error("unknown --check '" + a.check + "'");
    DualPair p = io::pair_from_json(io::load_json(a.pair));
    if (a.base_dim && a.base_dim != p.n)
        throw lbc::Error("pair file has base dimension " + std::to_string(p.n) + ", --base-dim is " +
                         std::to_string(a.base_dim));
    io::Format f = detail::format_of(c);
    auto want = [&](const char* k) { return a.check == "all" || a.check == k; };

    if (!a.left.empty() || !a.right.empty()) {
        if (a.left.empty() || a.right.empty())
            throw lbc::Error("--left and --right go together");
        InvariantSection s = io::read_invsection(a.left, p.n), t = io::read_invsection(a.right, p.n);
        InvariantSection lhs = bracket_on_E(p, s, t).map([&](const Poly& x) { return p.relations.reduce(x); });
        InvariantSection rhs =
            bracket_on_Ehat(p, psi(s), psi(t)).map([&](const Poly& x) { return p.relations.reduce(x); });
        if (f == io::Format::Json) {
            io::json j{{"schema", 1}, {"bracket_H", io::to_json(lhs)}, {"bracket_Hhat_dual", io::to_json(rhs)}};
            out << j.dump(2) << "\n";
        } else {
            out << "H = " << io::render(p.H, f) << "\n";
            out << "Hhat = " << io::render(p.Hhat, f) << "\n";
            out << "[[s,t]]_H = " << io::render(lhs, f) << "\n";
            out << "[[Psi s, Psi t]]_Hhat = " << io::render(rhs, f) << "\n";
        }
    }

    CheckReport rep;
    int sigma_c = commute_sign(p);
    auto forms = monomial_forms(p.n, "c");
    for (Component x : all_components) {
        InvariantSection s = symbolic_section(p.n, x, "u");
        for (auto& w : forms) {
            if (want("commute"))
                rep.merge(verify_commute(p, s, w, sigma_c));
            if (want("clifford"))
                rep.merge(verify_clifford(p, s, w));
        }
        for (Component y : all_components) {
            InvariantSection t = symbolic_section(p.n, y, "v");
            if (want("theorem"))
                rep.merge(verify_tduality_theorem(p, s, t));
            if (want("derived"))
                for (auto& w : forms)
                    rep.merge(derived_bracket_check(p, s, t, w));
        }
    }
    if (want("intertwine"))
        for (auto& w : forms)
            rep.merge(verify_intertwine(p, w));
    rep.facts.erase("literal commute residual");
    return detail::finish(rep, f, "T-duality (" + a.check + ")", out);
}

struct QuantArgs {
    std::string basis;
    std::string check = "all";
    std::string word;
    int max_word = 3, max_dorder = 8, max_hbar = 2;
};

inline int quantize(const QuantArgs& a, const Common& c, std::ostream& out)
{
    if (a.basis.empty())
        throw lbc::Error("--basis is required");
    static const std::vector<std::string> checks{"lie", "pbw", "limit", "qcom", "all"};
    if (std::find(checks.begin(), checks.end(), a.check) == checks.end())
        throw lbc::Error("unknown --check '" + a.check + "'");
    ConformalBasis B = io::basis_from_json(io::load_json(a.basis), a.max_dorder);
    Truncation tr{a.max_word, a.max_hbar};
    io::Format f = detail::format_of(c);
    if (!a.word.empty()) {
        std::istringstream in(a.word);
        Word w;
        for (std::string name; in >> name;) {
            int i = B.index_of(name);
            if (i < 0)
                throw lbc::Error("'" + name + "' is not a basis element");
            w.push_back(i);
        }
        EnvElement nf = pbw_normal_form(w, B, tr);
        if (f == io::Format::Json)
            out << io::json{{"schema", 1}, {"normal_form", to_string(nf, B)}}.dump(2) << "\n";
        else
            out << "NF = " << to_string(nf, B) << "\n";
    }
    auto want = [&](const char* k) { return a.check == "all" || a.check == k; };
    CheckReport rep;
    int len = std::min(3, a.max_word);
    if (want("lie"))
        rep.merge(check_lie(B));
    if (want("pbw"))
        rep.merge(check_pbw(B, len, tr));
    if (want("limit"))
        rep.merge(check_limit(B, len, tr));
    if (want("qcom"))
        rep.merge(check_quasi_commutativity(B, tr));
    return detail::finish(rep, f, "quantization (" + a.check + ")", out);
}

struct OracleArgs {
    int dim = 0;
    std::string flux;
    bool closed = true;
    std::string left, right;
    int samples = 32;
};

inline int oracle_cmd(const OracleArgs& a, const Common& c, std::ostream& out)
{
    BracketSpec spec = detail::load_spec(a.dim, a.flux, "", a.closed);
    oracle::DeltaTable T = oracle::table_from_spec(spec);
    io::Format f = detail::format_of(c);
    auto compare = [&](const DiffPoly& x, const DiffPoly& y) {
        LambdaPoly diff = oracle::bracket(x, y, T) - lambda_bracket(x, y, spec);
        return make_residual("delta calculus = master formula", to_string(x) + " ; " + to_string(y), diff,
                             spec.relations);
    };
    CheckReport rep;
    if (!a.left.empty() || !a.right.empty()) {
        if (a.left.empty() || a.right.empty())
            throw lbc::Error("--left and --right go together");
        DiffPoly x = io::read_diffpoly(a.left, spec.space), y = io::read_diffpoly(a.right, spec.space);
        oracle::DeltaExpr e = oracle::poisson(x, y, T);
        if (f == io::Format::Json)
            out << io::json{{"schema", 1},
                            {"distribution", oracle::to_string(e)},
                            {"bracket", io::to_json(oracle::fourier(e, spec.space))}}
                       .dump(2)
                << "\n";
        else
            out << "{f(t), g(s)} = " << oracle::to_string(e) << "\n"
                << "{f lambda g} = " << io::render(oracle::fourier(e, spec.space), f) << "\n";
        rep.items.push_back(compare(x, y));
    } else {
        auto gens = detail::generators(spec.space);
        for (auto& x : gens)
            for (auto& y : gens)
                rep.items.push_back(compare(x, y));
        Sampler rng(c.seed);
        for (int i = 0; i < a.samples; ++i) {
            DiffPoly x = rng.diffpoly(spec.space), y = rng.diffpoly(spec.space);
            rep.items.push_back(compare(x, y));
        }
    }
    return detail::finish(rep, f, "oracle equivalence", out);
}

/// Runs the command line; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Lambda-brackets, Courant-Dorfman algebras and T-duality checks", "lbc"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--format", common.format, "text, latex or json (default: $LBC_FORMAT or text)");
    app.add_option("--seed", common.seed, "seed for sampled checks")->capture_default_str();

    PvaArgs pva;
    auto* c1 = app.add_subcommand("check-pva", "PVA axiom suite for a bracket table");
    c1->add_option("--dim", pva.dim, "base dimension of the twisted Darboux table");
    c1->add_option("--flux", pva.flux, "flux JSON file (default: symbolic H)");
    c1->add_option("--spec", pva.spec, "generic bracket table JSON file");
    c1->add_flag("--closed", pva.closed, "impose dH = 0");
    c1->add_option("--samples", pva.samples, "random composite functions added to the generators");
    c1->add_option("--max-lambda", pva.max_lambda, "lambda-degree truncation")->capture_default_str();

    CdArgs cda;
    auto* c2 = app.add_subcommand("derive-cd", "Dorfman bracket and pairing from the lambda-bracket");
    c2->add_option("--dim", cda.dim)->required();
    c2->add_option("--flux", cda.flux);
    c2->add_option("--left", cda.left);
    c2->add_option("--right", cda.right);
    c2->add_option("--samples", cda.samples, "random triples for the axiom check");

    AsArgs asa;
    auto* c3 = app.add_subcommand("as-bracket", "lambda-bracket of two section functions against the geometry");
    c3->add_option("--dim", asa.dim)->required();
    c3->add_option("--flux", asa.flux);
    c3->add_option("--left", asa.left)->required();
    c3->add_option("--right", asa.right)->required();

    TdArgs tda;
    auto* c4 = app.add_subcommand("tdualize", "T-duality checks on a dual pair");
    c4->add_option("--base-dim", tda.base_dim);
    c4->add_option("--pair", tda.pair)->required();
    c4->add_option("--check", tda.check, "intertwine|commute|clifford|derived|theorem|all")->capture_default_str();
    c4->add_option("--left", tda.left);
    c4->add_option("--right", tda.right);

    QuantArgs qa;
    auto* c5 = app.add_subcommand("quantize", "truncated enveloping algebra checks");
    c5->add_option("--basis", qa.basis)->required();
    c5->add_option("--check", qa.check, "lie|pbw|limit|qcom|all")->capture_default_str();
    c5->add_option("--word", qa.word, "basis names to bring to normal form");
    c5->add_option("--max-word", qa.max_word)->capture_default_str();
    c5->add_option("--max-dorder", qa.max_dorder)->capture_default_str();
    c5->add_option("--max-hbar", qa.max_hbar)->capture_default_str();

    OracleArgs oa;
    auto* c6 = app.add_subcommand("oracle", "delta-calculus cross-check of the lambda-bracket engine");
    c6->add_option("--dim", oa.dim)->required();
    c6->add_option("--flux", oa.flux);
    c6->add_option("--left", oa.left);
    c6->add_option("--right", oa.right);
    c6->add_option("--samples", oa.samples)->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        detail::format_of(common);
        if (*c1)
            return check_pva(pva, common, out);
        if (*c2)
            return derive_cd(cda, common, out);
        if (*c3)
            return as_bracket(asa, common, out);
        if (*c4)
            return tdualize(tda, common, out);
        if (*c5)
            return quantize(qa, common, out);
        if (*c6)
            return oracle_cmd(oa, common, out);
    } catch (const lbc::Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace lbc::cli
