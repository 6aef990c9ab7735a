#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lbc/ast.hpp"
#include "lbc/error.hpp"
#include "lbc/poly.hpp"

namespace lbc {

/// Differential polynomials: polynomials in jet variables whose coefficients
/// are polynomials in function atoms. Both are carried by Poly.
using DiffPoly = Poly;
using Coefficient = Poly;

/// The generator set of a jet space and which generators are base
/// coordinates (function atoms depend on exactly those).
struct JetSpace {
    std::vector<std::string> names;
    std::vector<int> base_generator; ///< base coordinate k (1-based) -> generator index

    int size() const { return static_cast<int>(names.size()); }
    int base_dim() const { return static_cast<int>(base_generator.size()); }

    Var jet(int gen, int order) const { return jet_var(gen, order, names.at(gen)); }
    Poly u(int gen, int order = 0) const { return Poly(jet(gen, order)); }

    int index_of(const std::string& name) const
    {
        for (int i = 0; i < size(); ++i)
            if (names[i] == name)
                return i;
        return -1;
    }

    /// Base coordinate k (1-based) of generator `gen`, or 0 if it is not one.
    int base_index_of(int gen) const
    {
        for (int k = 0; k < base_dim(); ++k)
            if (base_generator[k] == gen)
                return k + 1;
        return 0;
    }

    /// Phase-space coordinates p_1..p_N, x^1..x^N; the x's are the base.
    static JetSpace darboux(int n)
    {
        JetSpace s;
        for (int i = 1; i <= n; ++i)
            s.names.push_back("p" + std::to_string(i));
        for (int i = 1; i <= n; ++i) {
            s.names.push_back("x" + std::to_string(i));
            s.base_generator.push_back(n + i - 1);
        }
        return s;
    }

    int momentum(int i) const { return i - 1; }          // darboux layout only
    int position(int i) const { return base_generator.at(i - 1); }

    bool operator==(const JetSpace&) const = default;
};

inline void require_jets_only(Var v)
{
    if (v.is_coord())
        throw Error("coordinate " + to_string(v) + " in a differential polynomial; map it to a jet first");
}

/// Total derivative along the loop: u^{(m)} -> u^{(m+1)}, chain rule on atoms.
inline DiffPoly total_derivative(const DiffPoly& f, const JetSpace& space)
{
    return apply_derivation(f, [&space](Var v) -> Poly {
        require_jets_only(v);
        if (v.is_jet())
            return Poly(jet_var(v.key().gen, v.key().order + 1, v.key().name));
        if (v.is_atom()) {
            Poly r;
            for (int k = 1; k <= space.base_dim(); ++k)
                r += Poly(atom_partial(v, k)) * space.u(space.base_generator[k - 1], 1);
            return r;
        }
        return Poly();
    });
}

inline DiffPoly total_derivative(DiffPoly f, const JetSpace& space, int times)
{
    for (int i = 0; i < times; ++i)
        f = total_derivative(f, space);
    return f;
}

/// Formal partial derivative by u_gen^{(order)}. Atoms depend on the base
/// coordinates only, so they contribute when the variable is an undifferentiated
/// base coordinate.
inline DiffPoly jet_partial(const DiffPoly& f, const JetSpace& space, int gen, int order)
{
    Var target = space.jet(gen, order);
    int k = order == 0 ? space.base_index_of(gen) : 0;
    return apply_derivation(f, [&](Var v) -> Poly {
        require_jets_only(v);
        if (v == target)
            return Poly(1);
        if (k && v.is_atom())
            return Poly(atom_partial(v, k));
        return Poly();
    });
}

/// Highest jet order of generator `gen` present in f (-1 when absent).
inline int max_jet_order(const DiffPoly& f, int gen)
{
    int m = -1;
    for (auto& v : f.variables())
        if (v.is_jet() && v.key().gen == gen)
            m = std::max(m, v.key().order);
    return m;
}

/// Euler-Lagrange expression sum_m (-d)^m df/du_i^{(m)}.
inline DiffPoly variational_derivative(const DiffPoly& f, const JetSpace& space, int gen)
{
    int top = std::max(0, max_jet_order(f, gen));
    DiffPoly r;
    for (int m = top; m >= 0; --m) {
        // Horner: r = -d(r) + df/du^{(m)}
        r = -total_derivative(r, space) + jet_partial(f, space, gen, m);
    }
    return r;
}

/// Equality of local functionals: every variational derivative of f - g
/// vanishes. This quotients by constants as well as by the image of d.
inline bool functional_equal(const DiffPoly& f, const DiffPoly& g, const JetSpace& space)
{
    DiffPoly h = f - g;
    for (int i = 0; i < space.size(); ++i)
        if (!variational_derivative(h, space, i).is_zero())
            return false;
    return true;
}

/// Constants-sensitive variant: additionally the constant terms must agree.
inline bool functional_equal_strict(const DiffPoly& f, const DiffPoly& g, const JetSpace& space)
{
    return functional_equal(f, g, space) && f.constant_term() == g.constant_term();
}

/// Base coordinates written as coordinates (forms side) become the
/// corresponding undifferentiated jets.
inline DiffPoly coords_to_jets(const Coefficient& c, const JetSpace& space)
{
    return substitute(c, [&space](Var v) -> std::optional<Poly> {
        if (!v.is_coord())
            return std::nullopt;
        int k = v.key().gen;
        if (k < 1 || k > space.base_dim())
            throw Error("coordinate " + to_string(v) + " outside the base of dimension " +
                        std::to_string(space.base_dim()));
        return space.u(space.base_generator[k - 1]);
    });
}

// ---------------------------------------------------------------------------
// normalization of raw trees

/// How identifiers in a raw tree resolve to polynomials.
struct Scope {
    std::function<std::optional<Poly>(const std::string&)> ident;
    std::set<std::string> antisymmetric{"H", "F", "Fhat", "Omega", "Hhat"};
    const JetSpace* jets = nullptr; ///< needed for d(...) nodes
};

/// Identifier resolution for a jet space: generator names and hbar.
inline Scope jet_scope(const JetSpace& space)
{
    Scope s;
    s.jets = &space;
    s.ident = [&space](const std::string& name) -> std::optional<Poly> {
        int g = space.index_of(name);
        if (g >= 0)
            return space.u(g);
        if (name == "hbar")
            return Poly(param_var("hbar"));
        return std::nullopt;
    };
    return s;
}

/// Identifier resolution for coefficients: x<k>/y<k> are coordinates.
inline Scope coefficient_scope(int base_dim, const std::string& prefix = "x")
{
    Scope s;
    s.ident = [base_dim, prefix](const std::string& name) -> std::optional<Poly> {
        for (const char* p : {"x", "y"}) {
            std::string pre = p;
            if (name.size() > pre.size() && name.compare(0, pre.size(), pre) == 0 &&
                name.find_first_not_of("0123456789", pre.size()) == std::string::npos) {
                int k = std::stoi(name.substr(pre.size()));
                if (k >= 1 && k <= base_dim)
                    return coord(k, prefix);
            }
        }
        if (name == "hbar")
            return Poly(param_var("hbar"));
        return std::nullopt;
    };
    return s;
}

/// Canonical form of a raw tree built from +, -, *, ^, constant division,
/// rationals, atoms, identifiers and d(...).
inline Poly normalize(const Ast& a, const Scope& scope)
{
    using K = Ast::Kind;
    auto sub = [&](std::size_t i) { return normalize(*a.args.at(i), scope); };
    switch (a.kind) {
    case K::Number:
        return Poly(a.number);
    case K::Ident: {
        if (scope.ident)
            if (auto p = scope.ident(a.name))
                return *p;
        throw Error("unresolved identifier '" + a.name + "'", a.line, a.column);
    }
    case K::Atom:
        return atom(a.name, a.indices, a.derivs, !a.indices.empty() && scope.antisymmetric.count(a.name));
    case K::Neg:
        return -sub(0);
    case K::Add:
        return sub(0) + sub(1);
    case K::Sub:
        return sub(0) - sub(1);
    case K::Mul:
        return sub(0) * sub(1);
    case K::Div: {
        Poly den = sub(1);
        if (!den.is_constant() || den.is_zero())
            throw Error("division by a non-constant or zero expression is not polynomial", a.line, a.column);
        return sub(0) * (Rational(1) / den.constant_term());
    }
    case K::Pow:
        return sub(0).pow(a.exponent);
    case K::Deriv: {
        if (!scope.jets)
            throw Error("d(...) needs a jet space", a.line, a.column);
        return total_derivative(sub(0), *scope.jets, a.order);
    }
    default:
        throw Error("not a polynomial expression", a.line, a.column);
    }
}

} // namespace lbc
