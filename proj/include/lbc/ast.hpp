#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lbc/symbols.hpp"

namespace lbc {

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

/// Raw expression tree produced by the parser. Nothing is normalized here:
/// atom indices are kept as written, products are not expanded.
struct Ast {
    enum class Kind {
        Number,  ///< rational literal
        Ident,   ///< bare identifier: generator, coordinate, form generator, frame field, parameter
        Atom,    ///< name[x] or name[i,j,...], with derivative marks D<k>
        Neg,
        Add,
        Sub,
        Mul,
        Div,
        Pow,     ///< args[0] ^ exponent
        Deriv,   ///< d(expr), d2(expr): total derivative of the given order
        Call,    ///< name(args...) other than d: wedge, ...
        List,    ///< [a, b, ...]
        Section, ///< sec(key=value, ...)
    };

    Kind kind = Kind::Number;
    Rational number;
    std::string name;
    std::vector<int> indices;     // Atom: table indices as written
    std::vector<int> derivs;      // Atom: derivative marks in order written
    bool scalar_atom = false;     // Atom written as name[x]
    unsigned exponent = 0;        // Pow
    int order = 0;                // Deriv
    std::vector<AstPtr> args;
    std::vector<std::string> keys; // Section: field names parallel to args
    int line = 1, column = 1;

    static AstPtr make(Ast a) { return std::make_shared<const Ast>(std::move(a)); }

    static AstPtr num(Rational q)
    {
        Ast a;
        a.kind = Kind::Number;
        a.number = std::move(q);
        return make(std::move(a));
    }
    static AstPtr ident(std::string n)
    {
        Ast a;
        a.kind = Kind::Ident;
        a.name = std::move(n);
        return make(std::move(a));
    }
    static AstPtr binary(Kind k, AstPtr l, AstPtr r)
    {
        Ast a;
        a.kind = k;
        a.args = {std::move(l), std::move(r)};
        return make(std::move(a));
    }
    static AstPtr unary(Kind k, AstPtr x)
    {
        Ast a;
        a.kind = k;
        a.args = {std::move(x)};
        return make(std::move(a));
    }
};

/// Structural equality of raw trees (positions ignored).
inline bool same_tree(const Ast& a, const Ast& b)
{
    if (a.kind != b.kind || a.name != b.name || a.indices != b.indices || a.derivs != b.derivs ||
        a.scalar_atom != b.scalar_atom || a.exponent != b.exponent || a.order != b.order ||
        a.keys != b.keys || a.args.size() != b.args.size())
        return false;
    if (a.kind == Ast::Kind::Number && a.number != b.number)
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_tree(*a.args[i], *b.args[i]))
            return false;
    return true;
}

} // namespace lbc
