#pragma once

// Turning raw trees into typed values: differential polynomials, forms over
// a coframe, and generalized-tangent sections.

#include <string>

#include "lbc/diffpoly.hpp"
#include "lbc/forms.hpp"
#include "lbc/io/parse.hpp"
#include "lbc/sigma.hpp"
#include "lbc/tduality.hpp"

namespace lbc::io {

inline DiffPoly read_diffpoly(std::string_view src, const JetSpace& space)
{
    return normalize(*parse(src), jet_scope(space));
}

/// Function of the base coordinates (`prefix` + k) and atoms.
inline Poly read_coefficient(std::string_view src, int base_dim, const std::string& prefix = "x")
{
    return normalize(*parse(src), coefficient_scope(base_dim, prefix));
}

/// Forms: `*` and wedge(...) are the wedge product, d(...) the exterior
/// derivative, generator names (dy1, A, ...) the coframe generators.
inline DForm eval_form(const Ast& a, const CoframePtr& cf)
{
    using K = Ast::Kind;
    auto sub = [&](std::size_t i) { return eval_form(*a.args.at(i), cf); };
    Scope coef = coefficient_scope(cf->base_dim(), cf->coord_prefix());
    switch (a.kind) {
    case K::Number:
    case K::Atom:
        return DForm::function(cf, normalize(a, coef));
    case K::Ident: {
        int g = cf->index_of(a.name);
        if (g >= 0)
            return DForm::generator(cf, g);
        if (auto p = coef.ident(a.name))
            return DForm::function(cf, *p);
        throw Error("unresolved identifier '" + a.name + "'", a.line, a.column);
    }
    case K::Neg: return -sub(0);
    case K::Add: return sub(0) + sub(1);
    case K::Sub: return sub(0) - sub(1);
    case K::Mul: return wedge(sub(0), sub(1));
    case K::Div: {
        DForm den = sub(1);
        Poly c = den.coefficient({});
        if (den.max_degree() > 0 || !c.is_constant() || c.is_zero())
            throw Error("division by a non-constant or zero expression is not polynomial", a.line, a.column);
        return sub(0) * Poly(Rational(1) / c.constant_term());
    }
    case K::Pow: {
        DForm b = sub(0);
        if (b.max_degree() > 0)
            throw Error("powers of forms of positive degree", a.line, a.column);
        return DForm::function(cf, b.coefficient({}).pow(a.exponent));
    }
    case K::Deriv: {
        DForm r = sub(0);
        for (int k = 0; k < a.order; ++k)
            r = exterior_derivative(r);
        return r;
    }
    case K::Call:
        if (a.name == "wedge") {
            if (a.args.empty())
                throw Error("wedge needs arguments", a.line, a.column);
            DForm r = sub(0);
            for (std::size_t i = 1; i < a.args.size(); ++i)
                r = wedge(r, sub(i));
            return r;
        }
        throw Error("unknown function '" + a.name + "'", a.line, a.column);
    default:
        throw Error("not a differential form", a.line, a.column);
    }
}

inline DForm read_form(std::string_view src, const CoframePtr& cf) { return eval_form(*parse(src), cf); }

namespace detail {

inline std::vector<Poly> coefficient_list(const Ast& a, int n, const Scope& scope, const std::string& key)
{
    if (a.kind != Ast::Kind::List)
        throw Error("section field '" + key + "' needs a list", a.line, a.column);
    if (static_cast<int>(a.args.size()) != n)
        throw Error("section field '" + key + "' needs " + std::to_string(n) + " entries", a.line, a.column);
    std::vector<Poly> out;
    for (auto& x : a.args)
        out.push_back(normalize(*x, scope));
    return out;
}

inline const Ast& section_node(const Ast& a)
{
    if (a.kind != Ast::Kind::Section)
        throw Error("expected sec(...)", a.line, a.column);
    return a;
}

} // namespace detail

/// sec(xi=[...], alpha=[...]) over the base with coordinates x^k.
inline GenSection read_gensection(std::string_view src, int n)
{
    AstPtr t = parse(src);
    const Ast& a = detail::section_node(*t);
    Scope scope = coefficient_scope(n, "x");
    GenSection s = GenSection::zero(n);
    for (std::size_t i = 0; i < a.keys.size(); ++i) {
        const Ast& v = *a.args[i];
        if (a.keys[i] == "xi")
            s.xi = detail::coefficient_list(v, n, scope, "xi");
        else if (a.keys[i] == "alpha")
            s.alpha = detail::coefficient_list(v, n, scope, "alpha");
        else
            throw Error("unknown section field '" + a.keys[i] + "'", v.line, v.column);
    }
    return s;
}

/// sec(xi=[...], xiw=..., alpha=[...], alphap=...) over the base with
/// coordinates y^k.
inline InvariantSection read_invsection(std::string_view src, int n)
{
    AstPtr t = parse(src);
    const Ast& a = detail::section_node(*t);
    Scope scope = coefficient_scope(n, "y");
    InvariantSection s = InvariantSection::zero(n);
    for (std::size_t i = 0; i < a.keys.size(); ++i) {
        const Ast& v = *a.args[i];
        const std::string& k = a.keys[i];
        if (k == "xi")
            s.xi = detail::coefficient_list(v, n, scope, k);
        else if (k == "alpha")
            s.alpha = detail::coefficient_list(v, n, scope, k);
        else if (k == "xiw")
            s.xiw = normalize(v, scope);
        else if (k == "alphap")
            s.alphap = normalize(v, scope);
        else
            throw Error("unknown section field '" + k + "'", v.line, v.column);
    }
    return s;
}

/// An invariant form written over E's coframe (dy^k, A).
inline InvariantForm read_invform(std::string_view src, const DualPair& p) { return split(read_form(src, p.E)); }

} // namespace lbc::io
