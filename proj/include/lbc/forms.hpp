#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbc/error.hpp"
#include "lbc/poly.hpp"
#include "lbc/relations.hpp"

namespace lbc {

/// Strictly increasing list of coframe generator indices.
using Wedge = std::vector<int>;
using FormTerms = std::map<Wedge, Poly>;

/// Product of two wedge monomials: the sign of the merge, 0 on a repeated factor.
inline std::pair<int, Wedge> wedge_merge(const Wedge& a, const Wedge& b)
{
    Wedge w = a;
    w.insert(w.end(), b.begin(), b.end());
    int s = sort_with_sign(w);
    return {s, std::move(w)};
}

/// A coframe: 1-form generators, the first `base_dim` of which are the
/// coordinate differentials dy^1..dy^n, the rest carrying an assigned
/// exterior derivative. Coefficients are functions of the base coordinates.
class Coframe {
public:
    struct Generator {
        std::string name;
        int coord = 0;  ///< k for dy^k, 0 for the other generators
        FormTerms d;    ///< assigned differential
    };

    Coframe(int base_dim, std::string coord_prefix = "y", std::string diff_prefix = "dy")
        : base_dim_(base_dim), prefix_(std::move(coord_prefix))
    {
        for (int k = 1; k <= base_dim; ++k)
            gens_.push_back({diff_prefix + std::to_string(k), k, {}});
    }

    int base_dim() const { return base_dim_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const std::string& coord_prefix() const { return prefix_; }
    const Generator& generator(int g) const { return gens_.at(g); }
    const std::vector<Generator>& generators() const { return gens_; }
    const RelationSet& relations() const { return relations_; }
    RelationSet& relations() { return relations_; }

    int add_generator(std::string name, FormTerms d = {})
    {
        gens_.push_back({std::move(name), 0, std::move(d)});
        return size() - 1;
    }

    int index_of(const std::string& name) const
    {
        for (int g = 0; g < size(); ++g)
            if (gens_[g].name == name)
                return g;
        return -1;
    }

    /// Generator index of dy^k (k 1-based).
    int dy(int k) const { return k - 1; }

    Poly coord(int k) const { return lbc::coord(k, prefix_); }

    /// The same coframe with every declared relation dropped.
    Coframe without_relations() const
    {
        Coframe c = *this;
        c.relations_ = RelationSet{};
        return c;
    }

    /// Sum over increasing I of name[I] dy^I.
    FormTerms table(const std::string& name, int rank) const
    {
        FormTerms out;
        Wedge idx;
        auto rec = [&](auto&& self, int from) -> void {
            if (static_cast<int>(idx.size()) == rank) {
                Wedge w;
                for (int k : idx)
                    w.push_back(dy(k));
                out[w] = atom(name, idx, {}, true);
                return;
            }
            for (int k = from; k <= base_dim_; ++k) {
                idx.push_back(k);
                self(self, k + 1);
                idx.pop_back();
            }
        };
        rec(rec, 1);
        return out;
    }

    bool compatible(const Coframe& o) const
    {
        if (this == &o)
            return true;
        if (base_dim_ != o.base_dim_ || prefix_ != o.prefix_ || gens_.size() != o.gens_.size())
            return false;
        for (std::size_t g = 0; g < gens_.size(); ++g)
            if (gens_[g].name != o.gens_[g].name || gens_[g].d != o.gens_[g].d)
                return false;
        return true;
    }

private:
    int base_dim_;
    std::string prefix_;
    std::vector<Generator> gens_;
    RelationSet relations_;
};

using CoframePtr = std::shared_ptr<const Coframe>;

/// Exterior-algebra element over a coframe. A default-constructed form is
/// the zero form and is compatible with every coframe.
class DForm {
public:
    DForm() = default;
    explicit DForm(CoframePtr cf) : cf_(std::move(cf)) {}
    DForm(CoframePtr cf, FormTerms t) : cf_(std::move(cf))
    {
        for (auto& [w, c] : t)
            add_term(w, c);
    }

    static DForm function(CoframePtr cf, const Poly& f)
    {
        DForm r(std::move(cf));
        r.add_term({}, f);
        return r;
    }
    static DForm generator(CoframePtr cf, int g)
    {
        DForm r(std::move(cf));
        r.add_term({g}, Poly(1));
        return r;
    }

    const CoframePtr& coframe() const { return cf_; }
    const FormTerms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Poly coefficient(const Wedge& w) const
    {
        auto it = terms_.find(w);
        return it == terms_.end() ? Poly() : it->second;
    }

    void add_term(const Wedge& w, const Poly& c)
    {
        if (c.is_zero())
            return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    /// Form degree if homogeneous; the zero form reports `empty_degree`, a
    /// mixed form reports nothing.
    std::optional<int> degree(int empty_degree = 0) const
    {
        if (terms_.empty())
            return empty_degree;
        int d = static_cast<int>(terms_.begin()->first.size());
        for (auto& [w, c] : terms_)
            if (static_cast<int>(w.size()) != d)
                return std::nullopt;
        return d;
    }

    DForm part(int deg) const
    {
        DForm r(cf_);
        for (auto& [w, c] : terms_)
            if (static_cast<int>(w.size()) == deg)
                r.terms_.emplace(w, c);
        return r;
    }

    int max_degree() const
    {
        int d = -1;
        for (auto& [w, c] : terms_)
            d = std::max(d, static_cast<int>(w.size()));
        return d;
    }

    DForm& operator+=(const DForm& o)
    {
        adopt(o);
        for (auto& [w, c] : o.terms_)
            add_term(w, c);
        return *this;
    }
    DForm& operator-=(const DForm& o)
    {
        adopt(o);
        for (auto& [w, c] : o.terms_)
            add_term(w, -c);
        return *this;
    }
    friend DForm operator+(DForm a, const DForm& b) { return a += b; }
    friend DForm operator-(DForm a, const DForm& b) { return a -= b; }
    friend DForm operator-(DForm a)
    {
        for (auto& [w, c] : a.terms_)
            c = -c;
        return a;
    }
    friend DForm operator*(const Poly& f, const DForm& a)
    {
        DForm r(a.cf_);
        for (auto& [w, c] : a.terms_)
            r.add_term(w, f * c);
        return r;
    }
    friend DForm operator*(const DForm& a, const Poly& f) { return f * a; }

    bool operator==(const DForm& o) const { return terms_ == o.terms_; }
    bool operator!=(const DForm& o) const { return !(*this == o); }

    /// Checks coframe agreement and adopts `o`'s coframe when this has none.
    void adopt(const DForm& o)
    {
        if (!o.cf_)
            return;
        if (!cf_) {
            cf_ = o.cf_;
            return;
        }
        if (!cf_->compatible(*o.cf_))
            throw Error("forms over mismatched coframes");
    }

    /// Applies `fn` to every coefficient.
    template <class Fn>
    DForm map_coefficients(Fn&& fn) const
    {
        DForm r(cf_);
        for (auto& [w, c] : terms_)
            r.add_term(w, fn(c));
        return r;
    }

private:
    CoframePtr cf_;
    FormTerms terms_;
};

inline DForm wedge(const DForm& a, const DForm& b)
{
    DForm r;
    r.adopt(a);
    r.adopt(b);
    for (auto& [wa, ca] : a.terms())
        for (auto& [wb, cb] : b.terms()) {
            auto [s, w] = wedge_merge(wa, wb);
            if (s)
                r.add_term(w, ca * cb * Rational(s));
        }
    return r;
}

inline const Coframe& coframe_of(const DForm& a)
{
    if (!a.coframe())
        throw Error("form without a coframe");
    return *a.coframe();
}

/// Coefficients reduced by the coframe's declared relations.
inline DForm reduce(const DForm& a)
{
    if (!a.coframe())
        return a;
    const auto& rel = a.coframe()->relations();
    return a.map_coefficients([&rel](const Poly& c) { return rel.reduce(c); });
}

namespace detail {

/// d without relation reduction.
inline DForm raw_d(const DForm& a)
{
    if (a.is_zero())
        return a;
    const Coframe& cf = coframe_of(a);
    DForm r(a.coframe());
    for (auto& [w, c] : a.terms()) {
        for (int k = 1; k <= cf.base_dim(); ++k) {
            Poly dc = base_partial(c, k);
            if (dc.is_zero())
                continue;
            auto [s, m] = wedge_merge({cf.dy(k)}, w);
            if (s)
                r.add_term(m, dc * Rational(s));
        }
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            const FormTerms& dg = cf.generator(w[pos]).d;
            Wedge before(w.begin(), w.begin() + pos), after(w.begin() + pos + 1, w.end());
            int sign = pos % 2 ? -1 : 1;
            for (auto& [dw, dcoef] : dg) {
                auto [s1, m1] = wedge_merge(before, dw);
                if (!s1)
                    continue;
                auto [s2, m2] = wedge_merge(m1, after);
                if (s2)
                    r.add_term(m2, c * dcoef * Rational(sign * s1 * s2));
            }
        }
    }
    return r;
}

} // namespace detail

/// Exterior derivative, reduced by the coframe's relations.
inline DForm exterior_derivative(const DForm& a) { return reduce(detail::raw_d(a)); }

/// Vector field as a combination of the frame dual to the coframe.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(CoframePtr cf) : cf_(std::move(cf)) {}

    static VectorField frame(CoframePtr cf, int g, const Poly& c = Poly(1))
    {
        VectorField v(std::move(cf));
        v.add(g, c);
        return v;
    }

    const CoframePtr& coframe() const { return cf_; }
    const std::map<int, Poly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    Poly component(int g) const
    {
        auto it = comps_.find(g);
        return it == comps_.end() ? Poly() : it->second;
    }

    void add(int g, const Poly& c)
    {
        if (c.is_zero())
            return;
        auto& slot = comps_[g];
        slot += c;
        if (slot.is_zero())
            comps_.erase(g);
    }

    VectorField& operator+=(const VectorField& o)
    {
        if (!cf_)
            cf_ = o.cf_;
        for (auto& [g, c] : o.comps_)
            add(g, c);
        return *this;
    }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a)
    {
        for (auto& [g, c] : a.comps_)
            c = -c;
        return a;
    }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a += -b; }
    friend VectorField operator*(const Poly& f, VectorField a)
    {
        VectorField r(a.cf_);
        for (auto& [g, c] : a.comps_)
            r.add(g, f * c);
        return r;
    }

    bool operator==(const VectorField& o) const { return comps_ == o.comps_; }

    /// Action on a function: frame fields dual to dy^k act as partials, the
    /// remaining (fibre) frame fields annihilate base functions.
    Poly apply(const Poly& f) const
    {
        Poly r;
        for (auto& [g, c] : comps_) {
            int k = cf_->generator(g).coord;
            if (k)
                r += c * base_partial(f, k);
        }
        return r;
    }

private:
    CoframePtr cf_;
    std::map<int, Poly> comps_;
};

/// Interior product: an antiderivation of degree -1.
inline DForm contract(const VectorField& X, const DForm& a)
{
    DForm r(a.coframe());
    for (auto& [w, c] : a.terms())
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            Poly x = X.component(w[pos]);
            if (x.is_zero())
                continue;
            Wedge rest = w;
            rest.erase(rest.begin() + pos);
            r.add_term(rest, c * x * Rational(pos % 2 ? -1 : 1));
        }
    return r;
}

inline DForm lie_derivative(const VectorField& X, const DForm& a)
{
    return contract(X, exterior_derivative(a)) + exterior_derivative(contract(X, a));
}

/// Frame field bracket [X_a, X_b] = -sum_c dtheta^c(X_a, X_b) X_c.
inline VectorField frame_bracket(const CoframePtr& cf, int a, int b)
{
    VectorField r(cf);
    if (a == b)
        return r;
    int lo = std::min(a, b), hi = std::max(a, b), s = a < b ? 1 : -1;
    for (int c = 0; c < cf->size(); ++c) {
        auto& d = cf->generator(c).d;
        auto it = d.find(Wedge{lo, hi});
        if (it != d.end())
            r.add(c, -it->second * Rational(s));
    }
    return r;
}

inline VectorField lie_bracket(const VectorField& X, const VectorField& Y)
{
    CoframePtr cf = X.coframe() ? X.coframe() : Y.coframe();
    VectorField r(cf);
    for (auto& [a, f] : X.components())
        for (auto& [b, g] : Y.components()) {
            VectorField xa = VectorField::frame(cf, a), yb = VectorField::frame(cf, b);
            r.add(b, f * xa.apply(g));
            r.add(a, -g * yb.apply(f));
            r += (f * g) * frame_bracket(cf, a, b);
        }
    if (cf) {
        VectorField red(cf);
        for (auto& [g, c] : r.components())
            red.add(g, cf->relations().reduce(c));
        return red;
    }
    return r;
}

/// d_H a = da - H ^ a.
inline DForm twisted_derivative(const DForm& H, const DForm& a)
{
    if (!H.is_zero() && H.degree() != std::optional<int>(3))
        throw Error("twisting form must have degree 3");
    return exterior_derivative(a) - wedge(H, a);
}

// ---------------------------------------------------------------------------
// generalized tangent bundle over a coframe

/// A section (vector field, 1-form) of T + T*.
struct GSection {
    VectorField v;
    DForm a;
};

/// Dorfman bracket ([X, Y], L_X b - i_Y da + i_Y i_X H).
inline GSection dorfman_bracket(const DForm& H, const GSection& s, const GSection& t)
{
    DForm a = lie_derivative(s.v, t.a) - contract(t.v, exterior_derivative(s.a)) + contract(t.v, contract(s.v, H));
    return {lie_bracket(s.v, t.v), reduce(a)};
}

/// 1/2 (i_Y a + i_X b)
inline Poly section_pairing(const GSection& s, const GSection& t)
{
    DForm r = contract(t.v, s.a) + contract(s.v, t.a);
    return r.coefficient({}) * Rational(1, 2);
}

/// Clifford action s . w = i_X w + a ^ w.
inline DForm clifford_act(const GSection& s, const DForm& w) { return contract(s.v, w) + wedge(s.a, w); }

// ---------------------------------------------------------------------------
// text form

inline std::string to_string(const DForm& a)
{
    if (a.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (auto& [w, c] : a.terms()) {
        std::string mono;
        for (int g : w)
            mono += (mono.empty() ? "" : "*") + coframe_of(a).generator(g).name;
        std::string coef;
        bool neg = false;
        if (c.size() == 1) {
            auto& [m, q] = *c.terms().begin();
            neg = q < 0;
            Poly abs_c(m, neg ? Rational(-q) : q);
            coef = to_string(abs_c);
        } else {
            coef = "(" + to_string(c) + ")";
        }
        std::string term;
        if (mono.empty())
            term = coef;
        else if (coef == "1")
            term = mono;
        else
            term = coef + "*" + mono;
        if (first)
            s += neg ? "-" + term : term;
        else
            s += (neg ? " - " : " + ") + term;
        first = false;
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const DForm& a) { return os << to_string(a); }

} // namespace lbc
