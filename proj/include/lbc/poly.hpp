#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lbc/symbols.hpp"

namespace lbc {

/// A commutative monomial: (variable, exponent) pairs sorted by variable.
class Monomial {
public:
    using Factor = std::pair<Var, unsigned>;

    Monomial() = default;
    explicit Monomial(Var v, unsigned e = 1)
    {
        if (e > 0)
            factors_.emplace_back(v, e);
    }

    const std::vector<Factor>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    unsigned degree() const
    {
        unsigned d = 0;
        for (auto& [v, e] : factors_)
            d += e;
        return d;
    }

    unsigned exponent(Var v) const
    {
        for (auto& [w, e] : factors_)
            if (w == v)
                return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const
    {
        Monomial r;
        r.factors_.reserve(factors_.size() + o.factors_.size());
        auto a = factors_.begin(), b = o.factors_.begin();
        while (a != factors_.end() && b != o.factors_.end()) {
            if (a->first == b->first) {
                r.factors_.emplace_back(a->first, a->second + b->second);
                ++a, ++b;
            } else if (a->first < b->first) {
                r.factors_.push_back(*a++);
            } else {
                r.factors_.push_back(*b++);
            }
        }
        r.factors_.insert(r.factors_.end(), a, factors_.end());
        r.factors_.insert(r.factors_.end(), b, o.factors_.end());
        return r;
    }

    /// This monomial with the exponent of `v` lowered by one. Requires exponent(v) > 0.
    Monomial lowered(Var v) const
    {
        Monomial r = *this;
        for (auto it = r.factors_.begin(); it != r.factors_.end(); ++it)
            if (it->first == v) {
                if (--it->second == 0)
                    r.factors_.erase(it);
                return r;
            }
        throw std::logic_error("Monomial::lowered: variable absent");
    }

    /// Monomial with every factor of `kind` removed.
    Monomial without(VarKind kind) const
    {
        Monomial r;
        for (auto& f : factors_)
            if (f.first.kind() != kind)
                r.factors_.push_back(f);
        return r;
    }

    Monomial only(VarKind kind) const
    {
        Monomial r;
        for (auto& f : factors_)
            if (f.first.kind() == kind)
                r.factors_.push_back(f);
        return r;
    }

    bool operator==(const Monomial& o) const { return factors_ == o.factors_; }

private:
    std::vector<Factor> factors_;
};

/// Graded lexicographic order on monomials.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        auto da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        auto& fa = a.factors();
        auto& fb = b.factors();
        for (std::size_t i = 0; i < fa.size() && i < fb.size(); ++i) {
            if (fa[i].first != fb[i].first)
                return fa[i].first < fb[i].first;
            if (fa[i].second != fb[i].second)
                return fa[i].second > fb[i].second;
        }
        return fa.size() < fb.size();
    }
};

/// Sparse polynomial over Q in interned variables, always in canonical form:
/// sorted monomials, merged coefficients, no zero terms.
class Poly {
public:
    using Terms = std::map<Monomial, Rational, MonomialLess>;

    Poly() = default;
    Poly(const Rational& c)
    {
        if (c != 0)
            terms_.emplace(Monomial{}, c);
    }
    Poly(long c) : Poly(Rational(c)) {}
    Poly(int c) : Poly(Rational(c)) {}
    explicit Poly(Var v, unsigned e = 1) { terms_.emplace(Monomial(v, e), Rational(1)); }
    Poly(const Monomial& m, const Rational& c)
    {
        if (c != 0)
            terms_.emplace(m, c);
    }

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

    Rational constant_term() const
    {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c)
    {
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o)
    {
        for (auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        for (auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Rational& s)
    {
        if (s == 0)
            terms_.clear();
        else
            for (auto& [m, c] : terms_)
                c *= s;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a)
    {
        for (auto& [m, c] : a.terms_)
            c = -c;
        return a;
    }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        Poly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_)
                r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(unsigned e) const
    {
        Poly r(1), base = *this;
        while (e) {
            if (e & 1)
                r *= base;
            e >>= 1;
            if (e)
                base *= base;
        }
        return r;
    }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Every distinct variable occurring in the polynomial, canonical order.
    std::vector<Var> variables() const
    {
        std::vector<Var> vs;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors())
                vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    bool contains_kind(VarKind kind) const
    {
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors())
                if (v.kind() == kind)
                    return true;
        return false;
    }

    /// Formal partial derivative treating every variable as independent.
    Poly diff(Var v) const
    {
        Poly r;
        for (auto& [m, c] : terms_) {
            unsigned e = m.exponent(v);
            if (e)
                r.add_term(m.lowered(v), c * e);
        }
        return r;
    }

    /// Groups terms by the part of the monomial made of `kind` variables;
    /// the values are the complementary coefficient polynomials.
    std::map<Monomial, Poly, MonomialLess> split_by(VarKind kind) const
    {
        std::map<Monomial, Poly, MonomialLess> out;
        for (auto& [m, c] : terms_)
            out[m.only(kind)].add_term(m.without(kind), c);
        return out;
    }

private:
    Terms terms_;
};

/// Applies the derivation determined by its values on variables.
template <class OnVar>
Poly apply_derivation(const Poly& p, OnVar&& on_var)
{
    std::unordered_map<Var, Poly> cache;
    Poly r;
    for (auto& [m, c] : p.terms()) {
        for (auto& [v, e] : m.factors()) {
            auto it = cache.find(v);
            if (it == cache.end())
                it = cache.emplace(v, on_var(v)).first;
            if (it->second.is_zero())
                continue;
            r += Poly(m.lowered(v), c * e) * it->second;
        }
    }
    return r;
}

/// Ring homomorphism fixing constants: each variable is replaced by
/// `on_var(v)` when that returns a value, else kept.
template <class OnVar>
Poly substitute(const Poly& p, OnVar&& on_var)
{
    std::unordered_map<Var, std::optional<Poly>> cache;
    Poly r;
    for (auto& [m, c] : p.terms()) {
        Poly term(c);
        Monomial kept;
        for (auto& [v, e] : m.factors()) {
            auto it = cache.find(v);
            if (it == cache.end())
                it = cache.emplace(v, on_var(v)).first;
            if (it->second)
                term *= it->second->pow(e);
            else
                kept = kept * Monomial(v, e);
        }
        r += term * Poly(kept, Rational(1));
    }
    return r;
}

/// Partial derivative along base coordinate `k` (1-based): acts on
/// coordinates and on atoms through their derivative multi-index.
inline Poly base_partial(const Poly& p, int k)
{
    return apply_derivation(p, [k](Var v) -> Poly {
        if (v.is_coord())
            return v.key().gen == k ? Poly(1) : Poly();
        if (v.is_atom())
            return Poly(atom_partial(v, k));
        return Poly();
    });
}

/// Polynomial for an atom, antisymmetry sign included.
inline Poly atom(const std::string& name, std::vector<int> indices = {}, std::vector<int> derivs = {},
                 bool antisymmetric = false)
{
    auto [sign, v] = atom_var(name, std::move(indices), std::move(derivs), antisymmetric);
    if (sign == 0)
        return Poly();
    return Poly(v) * Rational(sign);
}

inline Poly coord(int k, const std::string& prefix = "y") { return Poly(coord_var(k, prefix)); }

// ---------------------------------------------------------------------------
// text form (the DSL's canonical rendering)

inline std::string to_string(const Rational& q)
{
    return q.get_str();
}

inline std::string to_string(Var v)
{
    auto& k = v.key();
    switch (k.kind) {
    case VarKind::Param:
        return k.name;
    case VarKind::Coord:
        return k.name + std::to_string(k.gen);
    case VarKind::Jet:
        if (k.order == 0)
            return k.name;
        if (k.order == 1)
            return "d(" + k.name + ")";
        return "d" + std::to_string(k.order) + "(" + k.name + ")";
    case VarKind::Atom: {
        std::string s;
        for (int d : k.derivs)
            s += "D" + std::to_string(d) + " ";
        s += k.name + "[";
        if (k.indices.empty())
            s += "x";
        for (std::size_t i = 0; i < k.indices.size(); ++i)
            s += (i ? "," : "") + std::to_string(k.indices[i]);
        return s + "]";
    }
    }
    return "?";
}

inline std::string to_string(const Monomial& m)
{
    std::string s;
    for (auto& [v, e] : m.factors()) {
        if (!s.empty())
            s += "*";
        s += to_string(v);
        if (e > 1)
            s += "^" + std::to_string(e);
    }
    return s;
}

inline std::string to_string(const Poly& p)
{
    if (p.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Rational a = abs(c);
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        first = false;
        if (m.empty())
            s += to_string(a);
        else if (a == 1)
            s += to_string(m);
        else
            s += to_string(a) + "*" + to_string(m);
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << to_string(p); }

} // namespace lbc
