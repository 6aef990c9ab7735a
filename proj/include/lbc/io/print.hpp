#pragma once

// Text, LaTeX and JSON renderings. Text is the DSL itself and reads back;
// JSON documents carry "schema": 1 at the top level.

#include <cctype>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lbc/forms.hpp"
#include "lbc/lambda.hpp"
#include "lbc/quantize.hpp"
#include "lbc/report.hpp"
#include "lbc/sigma.hpp"
#include "lbc/tduality.hpp"

namespace lbc::io {

using nlohmann::json;

enum class Format { Text, Latex, Json };

inline Format parse_format(const std::string& s)
{
    if (s == "text")
        return Format::Text;
    if (s == "latex")
        return Format::Latex;
    if (s == "json")
        return Format::Json;
    throw Error("unknown format '" + s + "' (text, latex, json)");
}

// ---------------------------------------------------------------------------
// LaTeX

namespace latex {

/// Splits "p12" into ("p", "12"); names without a numeric tail get "".
inline std::pair<std::string, std::string> stem(const std::string& name)
{
    std::size_t k = name.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(name[k - 1])))
        --k;
    if (k == 0 || k == name.size())
        return {name, ""};
    return {name.substr(0, k), name.substr(k)};
}

/// Momenta and other generators carry lower indices, positions (x, y) upper.
inline std::string symbol(const std::string& name)
{
    if (name == "hbar")
        return "\\hbar";
    if (name == "Ahat")
        return "\\hat{A}";
    auto [s, idx] = stem(name);
    if (idx.empty())
        return s;
    bool upper = s == "x" || s == "y";
    return s + (upper ? "^{" : "_{") + idx + "}";
}

inline std::string rational(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

inline std::string var(Var v)
{
    auto& k = v.key();
    switch (k.kind) {
    case VarKind::Param: return symbol(k.name);
    case VarKind::Coord: return symbol(k.name + std::to_string(k.gen));
    case VarKind::Jet: {
        std::string base = symbol(k.name);
        if (k.order == 0)
            return base;
        if (k.order == 1)
            return "\\partial " + base;
        return "\\partial^{" + std::to_string(k.order) + "} " + base;
    }
    case VarKind::Atom: {
        std::string s;
        for (int d : k.derivs)
            s += "\\partial_{" + std::to_string(d) + "} ";
        s += k.name;
        if (k.indices.empty())
            return s + "(x)";
        s += "_{";
        for (int i : k.indices)
            s += std::to_string(i);
        return s + "}";
    }
    }
    return "?";
}

inline bool ends_with_command(const std::string& s)
{
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.back())))
        return false;
    std::size_t k = s.size();
    while (k > 0 && std::isalpha(static_cast<unsigned char>(s[k - 1])))
        --k;
    return k > 0 && s[k - 1] == '\\';
}

inline std::string monomial(const Monomial& m)
{
    std::string s;
    for (auto& [v, e] : m.factors()) {
        std::string f = var(v);
        if (e > 1) {
            bool simple = f.find(' ') == std::string::npos;
            f = (simple ? f : "(" + f + ")") + "^{" + std::to_string(e) + "}";
        }
        if (!s.empty() && (ends_with_command(s) || s.back() == ')') && std::isalpha(static_cast<unsigned char>(f[0])))
            s += " ";
        s += f;
    }
    return s;
}

inline std::string poly(const Poly& p)
{
    if (p.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Rational a = abs(c);
        s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        first = false;
        if (m.empty())
            s += rational(a);
        else if (a == 1)
            s += monomial(m);
        else
            s += rational(a) + " " + monomial(m);
    }
    return s;
}

inline std::string lambda_poly(const LambdaPoly& v, const std::string& var = "\\lambda")
{
    if (v.is_zero())
        return "0";
    std::string s;
    for (int k = 0; k <= v.degree(); ++k) {
        if (v.coeff(k).is_zero())
            continue;
        if (!s.empty())
            s += " + ";
        std::string c = v.coeff(k).size() == 1 ? poly(v.coeff(k)) : "\\left(" + poly(v.coeff(k)) + "\\right)";
        if (k == 0)
            s += c;
        else
            s += c + " " + var + (k > 1 ? "^{" + std::to_string(k) + "}" : "");
    }
    return s;
}

inline std::string form(const DForm& a)
{
    if (a.is_zero())
        return "0";
    std::string s;
    for (auto& [w, c] : a.terms()) {
        if (!s.empty())
            s += " + ";
        std::string mono;
        for (int g : w) {
            std::string n = coframe_of(a).generator(g).name;
            std::string sym = n.size() > 1 && n[0] == 'd' ? "d" + symbol(n.substr(1)) : symbol(n);
            mono += (mono.empty() ? "" : " \\wedge ") + sym;
        }
        std::string coef = c.size() == 1 ? poly(c) : "\\left(" + poly(c) + "\\right)";
        if (mono.empty())
            s += coef;
        else if (c == Poly(1))
            s += mono;
        else
            s += coef + "\\, " + mono;
    }
    return s;
}

inline std::string list(const std::vector<Poly>& v)
{
    std::string s = "\\left(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + poly(v[i]);
    return s + "\\right)";
}

} // namespace latex

// ---------------------------------------------------------------------------
// JSON

/// Nested-array serialization: [[coefficient, [[variable, exponent], ...]], ...]
inline json to_json(const Poly& p)
{
    json terms = json::array();
    for (auto& [m, c] : p.terms()) {
        json factors = json::array();
        for (auto& [v, e] : m.factors())
            factors.push_back({to_string(v), e});
        terms.push_back({c.get_str(), factors});
    }
    return terms;
}

/// {"lambda": [{"0": c0}, {"1": c1}, ...]} with text coefficients.
inline json to_json(const LambdaPoly& v)
{
    json a = json::array();
    int top = std::max(v.degree(), 0);
    for (int k = 0; k <= top; ++k)
        a.push_back({{std::to_string(k), to_string(v.coeff(k))}});
    return {{"lambda", a}};
}

inline json to_json(const Residual& r)
{
    return {{"identity", r.identity}, {"sample", r.sample}, {"raw", r.raw},
            {"reduced", r.reduced},   {"raw_zero", r.raw_zero}, {"zero", r.zero}};
}

inline json to_json(const CheckReport& rep)
{
    json items = json::array();
    for (auto& r : rep.items)
        items.push_back(to_json(r));
    return {{"schema", 1}, {"ok", rep.ok()}, {"checked", rep.items.size()}, {"failures", rep.failures()},
            {"items", items}, {"facts", rep.facts}};
}

inline json to_json(const DForm& a)
{
    json terms = json::array();
    for (auto& [w, c] : a.terms()) {
        json mono = json::array();
        for (int g : w)
            mono.push_back(coframe_of(a).generator(g).name);
        terms.push_back({{"wedge", mono}, {"coefficient", to_string(c)}});
    }
    return {{"form", terms}, {"text", to_string(a)}};
}

inline json to_json(const GenSection& s)
{
    json xi = json::array(), al = json::array();
    for (auto& c : s.xi)
        xi.push_back(to_string(c));
    for (auto& c : s.alpha)
        al.push_back(to_string(c));
    return {{"xi", xi}, {"alpha", al}};
}

inline json to_json(const InvariantSection& s)
{
    json xi = json::array(), al = json::array();
    for (auto& c : s.xi)
        xi.push_back(to_string(c));
    for (auto& c : s.alpha)
        al.push_back(to_string(c));
    return {{"xi", xi}, {"xiw", to_string(s.xiw)}, {"alpha", al}, {"alphap", to_string(s.alphap)}};
}

// ---------------------------------------------------------------------------
// one entry point per value type

inline std::string render(const Poly& p, Format f)
{
    switch (f) {
    case Format::Text: return to_string(p);
    case Format::Latex: return latex::poly(p);
    case Format::Json: return to_json(p).dump();
    }
    return "";
}

inline std::string render(const LambdaPoly& v, Format f)
{
    switch (f) {
    case Format::Text: return to_string(v);
    case Format::Latex: return latex::lambda_poly(v);
    case Format::Json: return to_json(v).dump();
    }
    return "";
}

inline std::string render(const DForm& a, Format f)
{
    switch (f) {
    case Format::Text: return to_string(a);
    case Format::Latex: return latex::form(a);
    case Format::Json: return to_json(a).dump();
    }
    return "";
}

inline std::string render(const GenSection& s, Format f)
{
    switch (f) {
    case Format::Text: return to_string(s);
    case Format::Latex: return "\\left(" + latex::list(s.xi) + ", " + latex::list(s.alpha) + "\\right)";
    case Format::Json: return to_json(s).dump();
    }
    return "";
}

inline std::string render(const InvariantSection& s, Format f)
{
    switch (f) {
    case Format::Text: return to_string(s);
    case Format::Latex:
        return "\\left(" + latex::list(s.xi) + ", " + latex::poly(s.xiw) + ", " + latex::list(s.alpha) + ", " +
               latex::poly(s.alphap) + "\\right)";
    case Format::Json: return to_json(s).dump();
    }
    return "";
}

/// Reports: one line per failing item plus a summary in text and LaTeX
/// (LaTeX renders residuals verbatim); the full document in JSON.
inline std::string render(const CheckReport& rep, Format f, const std::string& title)
{
    if (f == Format::Json) {
        json j = to_json(rep);
        j["title"] = title;
        return j.dump(2);
    }
    std::string s;
    const Residual* bad = rep.first_failure();
    s += title + ": " + std::to_string(rep.items.size()) + " checked, " + std::to_string(rep.failures()) +
         " failing\n";
    for (auto& [k, v] : rep.facts)
        s += "  " + k + " = " + v + "\n";
    if (bad) {
        if (f == Format::Latex)
            s += "  first failure: " + bad->identity + " on $" + bad->sample + "$\n  residual: \\texttt{" +
                 bad->reduced + "}\n";
        else
            s += "  first failure: " + bad->identity + "\n  sample: " + bad->sample + "\n  residual: " +
                 bad->reduced + "\n";
        if (bad->raw != bad->reduced)
            s += "  raw residual: " + bad->raw + "\n";
    }
    return s;
}

} // namespace lbc::io
