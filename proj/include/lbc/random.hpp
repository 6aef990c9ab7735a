#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lbc/diffpoly.hpp"

namespace lbc {

struct PolyShape {
    int max_terms = 3;
    int max_degree = 2;
    int max_order = 2;
    int atom_chance = 3;                         ///< out of 10
    std::vector<std::string> atoms{"f", "g"}; ///< scalar atom names
    bool constant_term = true;
};

/// Seeded sample generators for property checks. Same seed, same samples,
/// on every platform: only integer draws from mt19937_64 are used.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi)
    {
        // modulo keeps the sequence independent of the standard library's distributions
        return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool coin() { return uniform(0, 1) == 1; }

    Rational rational(int span = 3)
    {
        int num = 0;
        while (num == 0)
            num = uniform(-span, span);
        int den = uniform(1, 2);
        return ratio(num, den);
    }

    /// Random scalar atom, possibly with derivative marks.
    Poly scalar_atom(const PolyShape& shape, int base_dim)
    {
        std::string name = shape.atoms.at(uniform(0, static_cast<int>(shape.atoms.size()) - 1));
        std::vector<int> derivs;
        if (base_dim > 0)
            for (int n = uniform(0, 1); n > 0; --n)
                derivs.push_back(uniform(1, base_dim));
        return atom(name, {}, derivs);
    }

    DiffPoly diffpoly(const JetSpace& space, const PolyShape& shape = {})
    {
        DiffPoly f;
        int terms = uniform(1, shape.max_terms);
        for (int t = 0; t < terms; ++t) {
            DiffPoly m(rational());
            int deg = uniform(shape.constant_term ? 0 : 1, shape.max_degree);
            for (int d = 0; d < deg; ++d)
                m *= space.u(uniform(0, space.size() - 1), uniform(0, shape.max_order));
            if (uniform(0, 9) < shape.atom_chance)
                m *= scalar_atom(shape, space.base_dim());
            f += m;
        }
        return f;
    }

    /// Random function of the base coordinates (forms side).
    Poly base_function(int base_dim, const std::string& prefix, const PolyShape& shape = {})
    {
        Poly f;
        int terms = uniform(1, shape.max_terms);
        for (int t = 0; t < terms; ++t) {
            Poly m(rational());
            int deg = uniform(0, shape.max_degree);
            for (int d = 0; d < deg; ++d)
                m *= coord(uniform(1, base_dim), prefix);
            if (uniform(0, 9) < shape.atom_chance)
                m *= scalar_atom(shape, base_dim);
            f += m;
        }
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace lbc
