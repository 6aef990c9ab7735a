#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbc/cdalg.hpp"
#include "lbc/forms.hpp"

namespace lbc {

/// Totally antisymmetric 3-form table H_ijk over an N-dimensional base.
/// Components are functions of the base coordinates x^k (Coord variables
/// with prefix "x") and atoms.
class Flux {
public:
    /// Fully symbolic: H_ijk is the atom H[i,j,k].
    static Flux symbolic(int n, bool closed = true, std::string name = "H")
    {
        Flux h;
        h.n_ = n;
        h.closed_ = closed;
        h.symbol_ = std::move(name);
        return h;
    }

    static Flux zero(int n) { return explicit_entries(n, {}); }

    /// Explicit entries keyed by index triples (any order; sign applied).
    static Flux explicit_entries(int n, const std::vector<std::pair<std::vector<int>, Poly>>& entries,
                                 bool closed = true)
    {
        Flux h;
        h.n_ = n;
        h.closed_ = closed;
        for (auto& [idx, v] : entries) {
            if (idx.size() != 3)
                throw Error("flux entries need three indices");
            for (int k : idx)
                if (k < 1 || k > n)
                    throw Error("flux index " + std::to_string(k) + " outside 1.." + std::to_string(n));
            std::vector<int> s = idx;
            int sign = sort_with_sign(s);
            if (sign == 0) {
                if (!v.is_zero())
                    throw Error("flux entry with a repeated index must vanish");
                continue;
            }
            Poly val = v * Rational(sign);
            auto it = h.table_.find(s);
            if (it != h.table_.end() && it->second != val)
                throw Error("conflicting flux entries for the same index set");
            h.table_[s] = val;
        }
        return h;
    }

    int dim() const { return n_; }
    bool closed() const { return closed_; }
    bool is_symbolic() const { return !symbol_.empty(); }
    const std::string& symbol() const { return symbol_; }
    void set_closed(bool c) { closed_ = c; }

    /// H_ijk with 1-based indices in any order.
    Poly component(int i, int j, int k) const
    {
        if (is_symbolic())
            return atom(symbol_, {i, j, k}, {}, true);
        std::vector<int> s{i, j, k};
        int sign = sort_with_sign(s);
        if (!sign)
            return Poly();
        auto it = table_.find(s);
        return it == table_.end() ? Poly() : it->second * Rational(sign);
    }

    /// Relations to impose when closedness is on.
    RelationSet relations() const
    {
        RelationSet r;
        if (closed_ && is_symbolic())
            r.add_closed(symbol_, 3);
        return r;
    }

private:
    int n_ = 0;
    bool closed_ = true;
    std::string symbol_;
    std::map<std::vector<int>, Poly> table_;
};

/// The twisted Darboux brackets:
/// {x^i l p_j} = delta^i_j, {x l x} = 0, {p_i l p_j} = -sum_k H_ijk dx^k.
inline BracketSpec darboux_spec(int n, const Flux& H)
{
    if (n < 1)
        throw Error("dimension must be at least 1");
    if (H.dim() != n)
        throw Error("flux dimension " + std::to_string(H.dim()) + " does not match " + std::to_string(n));
    JetSpace space = JetSpace::darboux(n);
    BracketSpec spec(space);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            spec.set(space.position(i), space.position(j), LambdaPoly());
            spec.set(space.position(i), space.momentum(j), LambdaPoly(Poly(i == j ? 1 : 0)));
            spec.set(space.momentum(j), space.position(i), LambdaPoly(Poly(i == j ? -1 : 0)));
            Poly c;
            for (int k = 1; k <= n; ++k)
                c -= coords_to_jets(H.component(i, j, k), space) * space.u(space.position(k), 1);
            spec.set(space.momentum(i), space.momentum(j), LambdaPoly(c));
        }
    spec.relations = H.relations();
    return spec;
}

/// Coframe dx^1..dx^N on the base, coordinates x^k.
inline CoframePtr base_coframe(int n, const RelationSet& rel = {})
{
    auto cf = std::make_shared<Coframe>(n, "x", "dx");
    cf->relations() = rel;
    return cf;
}

/// (xi, alpha): vector field components xi^i and 1-form components alpha_i.
struct GenSection {
    std::vector<Poly> xi;
    std::vector<Poly> alpha;

    static GenSection zero(int n) { return {std::vector<Poly>(n), std::vector<Poly>(n)}; }
    int dim() const { return static_cast<int>(xi.size()); }

    bool operator==(const GenSection&) const = default;

    friend GenSection operator+(GenSection a, const GenSection& b)
    {
        for (int i = 0; i < a.dim(); ++i) {
            a.xi[i] += b.xi.at(i);
            a.alpha[i] += b.alpha.at(i);
        }
        return a;
    }
    friend GenSection operator*(const Poly& c, GenSection a)
    {
        for (int i = 0; i < a.dim(); ++i) {
            a.xi[i] = c * a.xi[i];
            a.alpha[i] = c * a.alpha[i];
        }
        return a;
    }
};

inline VectorField vector_part(const GenSection& s, const CoframePtr& cf)
{
    VectorField v(cf);
    for (int i = 0; i < s.dim(); ++i)
        v.add(cf->dy(i + 1), s.xi[i]);
    return v;
}

inline DForm form_part(const GenSection& s, const CoframePtr& cf)
{
    DForm a(cf);
    for (int i = 0; i < s.dim(); ++i)
        a.add_term({cf->dy(i + 1)}, s.alpha[i]);
    return a;
}

inline GenSection section_of(const VectorField& v, const DForm& a, int n)
{
    GenSection s = GenSection::zero(n);
    for (auto& [g, c] : v.components())
        s.xi.at(g) += c;
    for (auto& [w, c] : a.terms()) {
        if (w.size() != 1)
            throw Error("expected a 1-form");
        s.alpha.at(w[0]) += c;
    }
    return s;
}

/// H as a 3-form over the base coframe.
inline DForm flux_form(const Flux& H, const CoframePtr& cf)
{
    DForm h(cf);
    int n = H.dim();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k)
                h.add_term({cf->dy(i), cf->dy(j), cf->dy(k)}, H.component(i, j, k));
    return h;
}

/// f_(xi, alpha) = sum_k alpha_k dx^k + xi^k p_k.
inline DiffPoly as_function(const GenSection& s, const JetSpace& space)
{
    if (s.dim() != space.base_dim() || static_cast<int>(s.alpha.size()) != s.dim())
        throw Error("section dimension does not match the phase space");
    DiffPoly f;
    for (int k = 1; k <= s.dim(); ++k)
        f += coords_to_jets(s.alpha[k - 1], space) * space.u(space.position(k), 1) +
             coords_to_jets(s.xi[k - 1], space) * space.u(space.momentum(k));
    return f;
}

/// ([xi, chi], L_xi beta - i_chi d alpha + H(xi, chi, .)), where
/// H(xi, chi, .) = i_chi i_xi H.
inline GenSection geometric_dorfman(const GenSection& s, const GenSection& t, const Flux& H)
{
    int n = s.dim();
    if (t.dim() != n || H.dim() != n)
        throw Error("dimension mismatch");
    CoframePtr cf = base_coframe(n, H.relations());
    GSection a{vector_part(s, cf), form_part(s, cf)}, b{vector_part(t, cf), form_part(t, cf)};
    GSection r = dorfman_bracket(flux_form(H, cf), a, b);
    return section_of(r.v, r.a, n);
}

/// 1/2 (i_chi alpha + i_xi beta)
inline Poly geometric_pairing(const GenSection& s, const GenSection& t)
{
    if (s.dim() != t.dim())
        throw Error("dimension mismatch");
    Poly r;
    for (int i = 0; i < s.dim(); ++i)
        r += t.xi[i] * s.alpha[i] + s.xi[i] * t.alpha[i];
    return r * Rational(1, 2);
}

/// Sign relating the first product to twice the geometric pairing, read off
/// the reference pair s = t = (d_1, dx^1).
inline int detect_sigma(const BracketSpec& spec)
{
    int n = spec.space.base_dim();
    GenSection s = GenSection::zero(n);
    s.xi[0] = Poly(1);
    s.alpha[0] = Poly(1);
    DiffPoly f = as_function(s, spec.space);
    DiffPoly first = jth_product(f, f, 1, spec);
    DiffPoly twice = coords_to_jets(geometric_pairing(s, s), spec.space) * Rational(2);
    if (first == twice)
        return 1;
    if (first == -twice)
        return -1;
    throw Error("first product is not a signed multiple of the pairing on the reference pair");
}

/// The three correspondence residuals for one section pair. `sigma` is the
/// engine's global sign; the pair's own sign, when determined, is recorded.
inline CheckReport verify_correspondence(const GenSection& s, const GenSection& t, const Flux& H, int sigma, int j_max = 6)
{
    BracketSpec spec = darboux_spec(H.dim(), H);
    const JetSpace& space = spec.space;
    DiffPoly f = as_function(s, space), g = as_function(t, space);
    std::string name = sample_name({f, g});
    CheckReport rep;

    DiffPoly zeroth = jth_product(f, g, 0, spec) + as_function(geometric_dorfman(s, t, H), space);
    rep.items.push_back(make_residual("0-th product = -f[[s,t]]_H", name, zeroth, spec.relations));

    DiffPoly first = jth_product(f, g, 1, spec);
    DiffPoly twice = coords_to_jets(geometric_pairing(s, t), space) * Rational(2);
    rep.items.push_back(
        make_residual("1-st product = sigma 2<s,t>", name, first - twice * Rational(sigma), spec.relations));
    if (!twice.is_zero())
        rep.facts["pair sigma"] = first == twice ? "+1" : first == -twice ? "-1" : "none";
    rep.facts["sigma"] = sigma > 0 ? "+1" : "-1";

    for (int j = 2; j <= j_max; ++j)
        rep.items.push_back(make_residual("j-th product vanishes, j=" + std::to_string(j), name,
                                          jth_product(f, g, j, spec), spec.relations));
    return rep;
}

// ---------------------------------------------------------------------------
// text form

inline std::string to_string(const GenSection& s)
{
    auto list = [](const std::vector<Poly>& v) {
        std::string r = "[";
        for (std::size_t i = 0; i < v.size(); ++i)
            r += (i ? ", " : "") + to_string(v[i]);
        return r + "]";
    };
    return "sec(xi=" + list(s.xi) + ", alpha=" + list(s.alpha) + ")";
}

} // namespace lbc
