#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lbc/forms.hpp"
#include "lbc/report.hpp"

namespace lbc {

/// A base form table: either a symbolic antisymmetric atom table or explicit
/// terms over dy^1..dy^n (wedge entries are dy generator indices, 0-based).
struct TableSpec {
    std::string symbol;
    FormTerms terms;

    static TableSpec symbolic(std::string name) { return {std::move(name), {}}; }
    static TableSpec zero() { return {}; }
    static TableSpec explicit_terms(FormTerms t) { return {"", std::move(t)}; }
    bool is_symbolic() const { return !symbol.empty(); }
};

/// Circle bundle E with connection A and its T-dual Ê with connection Â,
/// both over the same n-dimensional base.
struct DualPair {
    int n = 0;
    FormTerms F, Fhat, Omega;
    RelationSet relations;
    CoframePtr E;       ///< (dy, A)
    CoframePtr Ehat;    ///< (dy, Ahat)
    CoframePtr doubled; ///< (dy, A, Ahat)
    DForm H;            ///< Omega - A ^ Fhat on E
    DForm Hhat;         ///< Omega - F ^ Ahat on Ehat

    int fibre() const { return n; }
};

namespace detail {

inline FormTerms resolve_table(const TableSpec& t, int n, int rank, const char* what)
{
    if (t.is_symbolic())
        return Coframe(n).table(t.symbol, rank);
    for (auto& [w, c] : t.terms) {
        if (static_cast<int>(w.size()) != rank)
            throw Error(std::string(what) + " must be a " + std::to_string(rank) + "-form");
        for (int g : w)
            if (g < 0 || g >= n)
                throw Error(std::string(what) + " has an index outside the base");
    }
    return t.terms;
}

/// Re-expresses a form on another coframe through a generator map.
inline DForm transport(const DForm& a, const CoframePtr& to, const std::vector<int>& gen_map)
{
    DForm r(to);
    for (auto& [w, c] : a.terms()) {
        Wedge m;
        for (int g : w)
            m.push_back(gen_map.at(g));
        int s = sort_with_sign(m);
        if (s)
            r.add_term(m, c * Rational(s));
    }
    return r;
}

inline void require_zero(const DForm& a, const std::string& what)
{
    if (!reduce(a).is_zero())
        throw Error("relation violation: " + what + " = " + to_string(reduce(a)));
}

} // namespace detail

inline DualPair build_pair(int n, const TableSpec& F, const TableSpec& Fhat, const TableSpec& Omega)
{
    if (n < 1)
        throw Error("base dimension must be at least 1");
    DualPair p;
    p.n = n;
    p.F = detail::resolve_table(F, n, 2, "F");
    p.Fhat = detail::resolve_table(Fhat, n, 2, "Fhat");
    p.Omega = detail::resolve_table(Omega, n, 3, "Omega");

    auto plain = std::make_shared<Coframe>(n);
    DForm FF = wedge(DForm(plain, p.F), DForm(plain, p.Fhat));
    if (F.is_symbolic())
        p.relations.add_closed(F.symbol, 2);
    if (Fhat.is_symbolic())
        p.relations.add_closed(Fhat.symbol, 2);
    if (Omega.is_symbolic()) {
        FormTerms rhs = FF.terms();
        p.relations.add({Omega.symbol, 3, [rhs](const std::vector<int>& J) {
                             Wedge w;
                             for (int k : J)
                                 w.push_back(k - 1);
                             auto it = rhs.find(w);
                             return it == rhs.end() ? Poly() : it->second;
                         }});
    }

    auto base = std::make_shared<Coframe>(n);
    base->relations() = p.relations;
    if (!F.is_symbolic())
        detail::require_zero(exterior_derivative(DForm(base, p.F)), "dF");
    if (!Fhat.is_symbolic())
        detail::require_zero(exterior_derivative(DForm(base, p.Fhat)), "dFhat");
    if (!Omega.is_symbolic())
        detail::require_zero(exterior_derivative(DForm(base, p.Omega)) - DForm(base, FF.terms()),
                             "dOmega - F^Fhat");

    auto E = std::make_shared<Coframe>(n);
    E->add_generator("A", p.F);
    E->relations() = p.relations;
    auto Eh = std::make_shared<Coframe>(n);
    Eh->add_generator("Ahat", p.Fhat);
    Eh->relations() = p.relations;
    auto D = std::make_shared<Coframe>(n);
    D->add_generator("A", p.F);
    D->add_generator("Ahat", p.Fhat);
    D->relations() = p.relations;
    p.E = E;
    p.Ehat = Eh;
    p.doubled = D;

    p.H = DForm(p.E, p.Omega) - wedge(DForm::generator(p.E, n), DForm(p.E, p.Fhat));
    p.Hhat = DForm(p.Ehat, p.Omega) - wedge(DForm(p.Ehat, p.F), DForm::generator(p.Ehat, n));

    detail::require_zero(exterior_derivative(p.H), "dH");
    detail::require_zero(exterior_derivative(p.Hhat), "dHhat");

    std::vector<int> from_E, from_Eh;
    for (int k = 0; k < n; ++k) {
        from_E.push_back(k);
        from_Eh.push_back(k);
    }
    from_E.push_back(n);
    from_Eh.push_back(n + 1);
    DForm AAh = wedge(DForm::generator(p.doubled, n), DForm::generator(p.doubled, n + 1));
    detail::require_zero(detail::transport(p.H, p.doubled, from_E) - detail::transport(p.Hhat, p.doubled, from_Eh) -
                             exterior_derivative(AAh),
                         "H - Hhat - d(A^Ahat)");
    return p;
}

/// Fully symbolic pair with tables F, Fhat, Omega.
inline DualPair symbolic_pair(int n)
{
    return build_pair(n, TableSpec::symbolic("F"), TableSpec::symbolic("Fhat"), TableSpec::symbolic("Omega"));
}

// ---------------------------------------------------------------------------
// invariant sections and forms

/// xi^mu h_mu + xi_w e  (+)  alpha_mu dy^mu + alpha_p A
struct InvariantSection {
    std::vector<Poly> xi;
    Poly xiw;
    std::vector<Poly> alpha;
    Poly alphap;

    static InvariantSection zero(int n) { return {std::vector<Poly>(n), Poly(), std::vector<Poly>(n), Poly()}; }
    int dim() const { return static_cast<int>(xi.size()); }
    bool operator==(const InvariantSection&) const = default;
    bool is_zero() const { return *this == zero(dim()); }

    InvariantSection map(const std::function<Poly(const Poly&)>& fn) const
    {
        InvariantSection r = *this;
        for (auto& c : r.xi)
            c = fn(c);
        for (auto& c : r.alpha)
            c = fn(c);
        r.xiw = fn(r.xiw);
        r.alphap = fn(r.alphap);
        return r;
    }

    friend InvariantSection operator-(const InvariantSection& a, const InvariantSection& b)
    {
        InvariantSection r = a;
        for (int i = 0; i < a.dim(); ++i) {
            r.xi[i] -= b.xi.at(i);
            r.alpha[i] -= b.alpha.at(i);
        }
        r.xiw -= b.xiw;
        r.alphap -= b.alphap;
        return r;
    }
};

/// (xi, xi_w, alpha, alpha_p) -> (xi, alpha_p, alpha, xi_w)
inline InvariantSection psi(const InvariantSection& s)
{
    InvariantSection r = s;
    std::swap(r.xiw, r.alphap);
    return r;
}

/// The section on a coframe whose generator n is the fibre generator.
inline GSection to_gsection(const InvariantSection& s, const CoframePtr& cf)
{
    int n = s.dim();
    if (cf->base_dim() != n || cf->size() != n + 1)
        throw Error("section does not match the coframe");
    GSection g{VectorField(cf), DForm(cf)};
    for (int k = 0; k < n; ++k) {
        g.v.add(k, s.xi[k]);
        g.a.add_term({k}, s.alpha[k]);
    }
    g.v.add(n, s.xiw);
    g.a.add_term({n}, s.alphap);
    return g;
}

inline InvariantSection from_gsection(const GSection& g, int n)
{
    InvariantSection s = InvariantSection::zero(n);
    for (auto& [k, c] : g.v.components())
        (k < n ? s.xi.at(k) : s.xiw) += c;
    for (auto& [w, c] : g.a.terms()) {
        if (w.size() != 1)
            throw Error("expected a 1-form");
        (w[0] < n ? s.alpha.at(w[0]) : s.alphap) += c;
    }
    return s;
}

/// omega = alpha + A ^ beta with alpha, beta base forms.
struct InvariantForm {
    FormTerms alpha;
    FormTerms beta;

    bool operator==(const InvariantForm&) const = default;
};

inline DForm to_form(const InvariantForm& w, const CoframePtr& cf)
{
    int fib = cf->base_dim();
    return DForm(cf, w.alpha) + wedge(DForm::generator(cf, fib), DForm(cf, w.beta));
}

inline InvariantForm split(const DForm& a)
{
    int fib = coframe_of(a).base_dim();
    DForm al(a.coframe()), be(a.coframe());
    for (auto& [w, c] : a.terms()) {
        if (w.empty() || w.back() != fib) {
            al.add_term(w, c);
        } else {
            // dy^I ^ A = (-1)^|I| A ^ dy^I
            Wedge rest(w.begin(), w.end() - 1);
            be.add_term(rest, c * Rational(rest.size() % 2 ? -1 : 1));
        }
    }
    return {al.terms(), be.terms()};
}

/// T(alpha + A ^ beta) = beta - Ahat ^ alpha
inline InvariantForm t_transform(const InvariantForm& w)
{
    InvariantForm r{w.beta, {}};
    for (auto& [m, c] : w.alpha)
        r.beta[m] = -c;
    return r;
}

inline DForm clifford_act(const InvariantSection& s, const DForm& w)
{
    if (!w.coframe())
        return w;
    return clifford_act(to_gsection(s, w.coframe()), w);
}

inline Poly section_pairing(const InvariantSection& s, const InvariantSection& t)
{
    Poly r = s.xiw * t.alphap + t.xiw * s.alphap;
    for (int k = 0; k < s.dim(); ++k)
        r += s.xi[k] * t.alpha.at(k) + t.xi[k] * s.alpha.at(k);
    return r * Rational(1, 2);
}

// ---------------------------------------------------------------------------
// text form

inline std::string to_string(const InvariantSection& s)
{
    auto list = [](const std::vector<Poly>& v) {
        std::string r = "[";
        for (std::size_t i = 0; i < v.size(); ++i)
            r += (i ? ", " : "") + to_string(v[i]);
        return r + "]";
    };
    return "sec(xi=" + list(s.xi) + ", xiw=" + to_string(s.xiw) + ", alpha=" + list(s.alpha) +
           ", alphap=" + to_string(s.alphap) + ")";
}

inline std::string to_string(const InvariantForm& w, int n)
{
    auto cf = std::make_shared<Coframe>(n);
    cf->add_generator("A");
    return to_string(to_form(w, cf));
}

// ---------------------------------------------------------------------------
// checks

inline Residual form_residual(std::string identity, std::string sample, const DForm& raw)
{
    DForm red = reduce(raw);
    return {std::move(identity), std::move(sample), to_string(raw), to_string(red), raw.is_zero(), red.is_zero()};
}

/// T(d_H w) + d_Hhat(T w)
inline CheckReport verify_intertwine(const DualPair& p, const InvariantForm& w)
{
    InvariantForm lhs = t_transform(split(twisted_derivative(p.H, to_form(w, p.E))));
    DForm rhs = twisted_derivative(p.Hhat, to_form(t_transform(w), p.Ehat));
    CheckReport rep;
    rep.items.push_back(
        form_residual("T(d_H w) = -d_Hhat(T w)", to_string(w, p.n), to_form(lhs, p.Ehat) + rhs));
    return rep;
}

namespace detail {

inline std::pair<DForm, DForm> commute_sides(const DualPair& p, const InvariantSection& s, const InvariantForm& w)
{
    DForm lhs = to_form(t_transform(split(clifford_act(s, to_form(w, p.E)))), p.Ehat);
    DForm rhs = clifford_act(psi(s), to_form(t_transform(w), p.Ehat));
    return {lhs, rhs};
}

} // namespace detail

/// Global sign sigma_c in T(s.w) = sigma_c Psi(s).T(w), read off the
/// reference pair s = e, w = A.
inline int commute_sign(const DualPair& p)
{
    InvariantSection s = InvariantSection::zero(p.n);
    s.xiw = Poly(1);
    InvariantForm w{{}, {{Wedge{}, Poly(1)}}};
    auto [lhs, rhs] = detail::commute_sides(p, s, w);
    if (lhs == rhs)
        return 1;
    if (lhs == -rhs)
        return -1;
    throw Error("T does not intertwine the Clifford actions up to sign on the reference pair");
}

/// T(s.w) - sigma_c Psi(s).T(w); the literal (sigma_c = 1) residual is
/// recorded as a fact.
inline CheckReport verify_commute(const DualPair& p, const InvariantSection& s, const InvariantForm& w, int sigma_c)
{
    auto [lhs, rhs] = detail::commute_sides(p, s, w);
    CheckReport rep;
    std::string name = to_string(s) + " ; " + to_string(w, p.n);
    rep.items.push_back(form_residual("T(s.w) = sigma_c Psi(s).T(w)", name, lhs - rhs * Poly(sigma_c)));
    rep.facts["sigma_c"] = sigma_c > 0 ? "+1" : "-1";
    rep.facts["literal commute residual"] = to_string(reduce(lhs - rhs));
    return rep;
}

/// s.(s.w) - <s,s> w
inline CheckReport verify_clifford(const DualPair& p, const InvariantSection& s, const InvariantForm& w)
{
    DForm om = to_form(w, p.E);
    DForm r = clifford_act(s, clifford_act(s, om)) - section_pairing(s, s) * om;
    CheckReport rep;
    rep.items.push_back(form_residual("s.(s.w) = <s,s> w", to_string(s) + " ; " + to_string(w, p.n), r));
    return rep;
}

/// [[s,t]]_H . w - [[d_H, s.], t.] w with graded commutators; d_H and the
/// Clifford actions are odd, so [d_H, s.] = d_H s. + s. d_H and the outer
/// commutator of that even operator with t. is a plain difference.
inline Residual derived_bracket_residual(const DForm& H, const GSection& s, const GSection& t, const DForm& w,
                                         const std::string& sample)
{
    auto inner = [&](const DForm& x) { return twisted_derivative(H, clifford_act(s, x)) + clifford_act(s, twisted_derivative(H, x)); };
    DForm rhs = inner(clifford_act(t, w)) - clifford_act(t, inner(w));
    DForm lhs = clifford_act(dorfman_bracket(H, s, t), w);
    return form_residual("[[s,t]]_H . w = [[d_H, s], t] w", sample, lhs - rhs);
}

inline CheckReport derived_bracket_check(const DualPair& p, const InvariantSection& s, const InvariantSection& t,
                                         const InvariantForm& w)
{
    CheckReport rep;
    rep.items.push_back(derived_bracket_residual(p.H, to_gsection(s, p.E), to_gsection(t, p.E), to_form(w, p.E),
                                                 to_string(s) + " ; " + to_string(t) + " ; " + to_string(w, p.n)));
    return rep;
}

/// [[s,t]]_H computed on E.
inline InvariantSection bracket_on_E(const DualPair& p, const InvariantSection& s, const InvariantSection& t)
{
    return from_gsection(dorfman_bracket(p.H, to_gsection(s, p.E), to_gsection(t, p.E)), p.n);
}

/// [[s,t]]_Hhat computed on Ehat.
inline InvariantSection bracket_on_Ehat(const DualPair& p, const InvariantSection& s, const InvariantSection& t)
{
    return from_gsection(dorfman_bracket(p.Hhat, to_gsection(s, p.Ehat), to_gsection(t, p.Ehat)), p.n);
}

inline CheckReport verify_tduality_theorem(const DualPair& p, const InvariantSection& s, const InvariantSection& t)
{
    CheckReport rep;
    std::string name = to_string(s) + " ; " + to_string(t);
    InvariantSection raw = psi(bracket_on_E(p, s, t)) - bracket_on_Ehat(p, psi(s), psi(t));
    InvariantSection red = raw.map([&](const Poly& c) { return p.relations.reduce(c); });
    rep.items.push_back({"Psi[[s,t]]_H = [[Psi s, Psi t]]_Hhat", name, to_string(raw), to_string(red), raw.is_zero(),
                         red.is_zero()});
    Poly pr = section_pairing(s, t) - section_pairing(psi(s), psi(t)), pred = p.relations.reduce(pr);
    rep.items.push_back(
        {"<s,t> = <Psi s, Psi t>", name, to_string(pr), to_string(pred), pr.is_zero(), pred.is_zero()});
    return rep;
}

// ---------------------------------------------------------------------------
// symbolic inputs for the exhaustive checks

enum class Component { Xi, Xiw, Alpha, Alphap };
inline constexpr std::array<Component, 4> all_components{Component::Xi, Component::Xiw, Component::Alpha,
                                                         Component::Alphap};

inline const char* component_name(Component c)
{
    switch (c) {
    case Component::Xi: return "xi";
    case Component::Xiw: return "xiw";
    case Component::Alpha: return "alpha";
    case Component::Alphap: return "alphap";
    }
    return "?";
}

/// A section with only one component type populated by atoms name[mu] (or
/// name for the fibre components), all functions of the base.
inline InvariantSection symbolic_section(int n, Component c, const std::string& name)
{
    InvariantSection s = InvariantSection::zero(n);
    switch (c) {
    case Component::Xi:
        for (int k = 1; k <= n; ++k)
            s.xi[k - 1] = atom(name, {k});
        break;
    case Component::Alpha:
        for (int k = 1; k <= n; ++k)
            s.alpha[k - 1] = atom(name, {k});
        break;
    case Component::Xiw: s.xiw = atom(name); break;
    case Component::Alphap: s.alphap = atom(name); break;
    }
    return s;
}

/// One invariant form per coframe monomial of E, coefficient c[I] or c[I,0]
/// for the A-part; degrees 0..n+1.
inline std::vector<InvariantForm> monomial_forms(int n, const std::string& name)
{
    std::vector<InvariantForm> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Wedge w;
        std::vector<int> idx;
        for (int k = 0; k < n; ++k)
            if (mask >> k & 1) {
                w.push_back(k);
                idx.push_back(k + 1);
            }
        out.push_back({{{w, atom(name, idx)}}, {}});
        idx.push_back(0);
        out.push_back({{}, {{w, atom(name, idx)}}});
    }
    return out;
}

} // namespace lbc
