#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lbc/poly.hpp"

namespace lbc {

/// Declared exterior-derivative relation dT = R for an antisymmetric atom
/// table T of rank p. `rhs(J)` returns the dy^J coefficient of R for a
/// strictly increasing index list J of length p + 1.
struct ExteriorRelation {
    std::string name;
    int rank = 0;
    std::function<Poly(const std::vector<int>&)> rhs;
};

/// Rewrite system for declared relations. Normal form: an atom d_D T_I is
/// irreducible iff no index in D is smaller than min(I); otherwise the
/// derivative with the smallest leading index is eliminated.
class RelationSet {
public:
    void add_closed(const std::string& name, int rank)
    {
        rels_.push_back({name, rank, [](const std::vector<int>&) { return Poly(); }});
    }

    void add(ExteriorRelation rel) { rels_.push_back(std::move(rel)); }

    bool empty() const { return rels_.empty(); }
    const std::vector<ExteriorRelation>& relations() const { return rels_; }

    const ExteriorRelation* find(const std::string& name) const
    {
        for (auto& r : rels_)
            if (r.name == name)
                return &r;
        return nullptr;
    }

    bool reducible(Var v) const
    {
        if (!v.is_atom() || v.key().derivs.empty() || v.key().indices.empty())
            return false;
        auto* rel = find(v.key().name);
        if (!rel || static_cast<int>(v.key().indices.size()) != rel->rank)
            return false;
        return v.key().derivs.front() < v.key().indices.front();
    }

    Poly reduce(Poly p) const
    {
        if (rels_.empty())
            return p;
        for (int guard = 0; guard < 10000; ++guard) {
            bool hit = false;
            for (auto& v : p.variables())
                if (reducible(v)) {
                    hit = true;
                    break;
                }
            if (!hit)
                return p;
            p = substitute(p, [this](Var v) -> std::optional<Poly> {
                if (!reducible(v))
                    return std::nullopt;
                return rewrite_once(v);
            });
        }
        throw std::runtime_error("RelationSet::reduce: rewriting did not terminate");
    }

private:
    Poly rewrite_once(Var v) const
    {
        auto& key = v.key();
        auto* rel = find(key.name);
        int lead = key.derivs.front();
        std::vector<int> rest(key.derivs.begin() + 1, key.derivs.end());

        std::vector<int> J = key.indices;
        J.insert(J.begin(), lead);
        // d_lead T_I = R_J - sum_{r>=1} (-1)^r d_{j_r} T_{J \ j_r}
        Poly out = rel->rhs(J);
        for (std::size_t r = 1; r < J.size(); ++r) {
            std::vector<int> I;
            for (std::size_t q = 0; q < J.size(); ++q)
                if (q != r)
                    I.push_back(J[q]);
            Poly term = atom(key.name, I, {J[r]}, true);
            if (r % 2 == 1)
                out += term;
            else
                out -= term;
        }
        for (int k : rest)
            out = base_partial(out, k);
        return out;
    }

    std::vector<ExteriorRelation> rels_;
};

} // namespace lbc
