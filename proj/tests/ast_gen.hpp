#pragma once

#include "lbc/ast.hpp"
#include "lbc/random.hpp"

namespace lbc::testing {

/// Random raw expression trees in the shapes the parser produces.
inline AstPtr random_ast(Sampler& rng, int depth)
{
    using K = Ast::Kind;
    if (depth <= 0 || rng.uniform(0, 3) == 0) {
        switch (rng.uniform(0, 2)) {
        case 0: return Ast::num(Rational(rng.uniform(0, 20)));
        case 1: {
            static const char* names[] = {"p1", "x2", "y1", "A", "k", "w3"};
            return Ast::ident(names[rng.uniform(0, 5)]);
        }
        default: {
            Ast a;
            a.kind = K::Atom;
            a.scalar_atom = rng.coin();
            a.name = a.scalar_atom ? "f" : "H";
            if (!a.scalar_atom)
                for (int i = rng.uniform(1, 3); i > 0; --i)
                    a.indices.push_back(rng.uniform(1, 4));
            for (int i = rng.uniform(0, 2); i > 0; --i)
                a.derivs.push_back(rng.uniform(1, 3));
            return Ast::make(std::move(a));
        }
        }
    }
    switch (rng.uniform(0, 7)) {
    case 0: return Ast::unary(K::Neg, random_ast(rng, depth - 1));
    case 1: return Ast::binary(K::Add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 2: return Ast::binary(K::Sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 3: return Ast::binary(K::Mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 4: return Ast::binary(K::Div, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 5: {
        Ast a;
        a.kind = K::Pow;
        a.exponent = static_cast<unsigned>(rng.uniform(0, 3));
        a.args = {random_ast(rng, depth - 1)};
        return Ast::make(std::move(a));
    }
    case 6: {
        Ast a;
        a.kind = K::Deriv;
        a.order = rng.uniform(1, 3);
        a.args = {random_ast(rng, depth - 1)};
        return Ast::make(std::move(a));
    }
    default: {
        Ast a;
        int shape = rng.uniform(0, 2);
        if (shape == 2) {
            a.kind = K::Section;
            a.name = "sec";
            for (const char* key : {"xi", "xiw", "alpha", "alphap"})
                if (rng.coin()) {
                    a.keys.push_back(key);
                    a.args.push_back(random_ast(rng, depth - 1));
                }
            return Ast::make(std::move(a));
        }
        a.kind = shape ? K::List : K::Call;
        if (a.kind == K::Call)
            a.name = "wedge";
        for (int i = rng.uniform(1, 3); i > 0; --i)
            a.args.push_back(random_ast(rng, depth - 1));
        return Ast::make(std::move(a));
    }
    }
}

} // namespace lbc::testing
