#pragma once

// Desk calculus of local distributions a(t) b(s) delta^(k)(t - s), used to
// cross-check the lambda-bracket engine. It never goes through the
// master formula: brackets are expanded by the Leibniz rule in the (t, s)
// picture, then integrated against Taylor-expanded kernels.
//
// Conventions: delta^(k) is the k-th derivative in its argument r = t - s;
// the circle has total measure 1; the moments are
//   int r^q delta^(k)(r) dr = (-1)^k k!  if q = k,  0 otherwise.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "lbc/diffpoly.hpp"
#include "lbc/lambda.hpp"

namespace lbc::oracle {

/// a(t) b(s) delta^(k)(t - s)
struct DeltaTerm {
    DiffPoly at;
    DiffPoly as;
    int k = 0;
};

/// Finite sum of DeltaTerms; like terms are merged on (at, k) pairs only
/// when `as` is 1, which is the common case after the bracket expansion.
struct DeltaExpr {
    std::vector<DeltaTerm> terms;

    void add(DeltaTerm t)
    {
        if (t.at.is_zero() || t.as.is_zero())
            return;
        terms.push_back(std::move(t));
    }
    void append(const DeltaExpr& o)
    {
        for (auto& t : o.terms)
            add(t);
    }
};

/// {u_i(t), u_j(s)} for every ordered generator pair.
struct DeltaTable {
    JetSpace space;
    std::vector<std::vector<DeltaExpr>> entries;

    explicit DeltaTable(JetSpace s) : space(std::move(s))
    {
        entries.assign(space.size(), std::vector<DeltaExpr>(space.size()));
    }
};

/// The twisted Darboux brackets written directly in the (t, s) picture:
///   {x^i(t), p_j(s)} = delta^i_j delta(t-s),
///   {p_i(t), p_j(s)} = -sum_k H_ijk(t) dx^k(t) delta(t-s).
/// `H(i,j,k)` gives the flux component (1-based indices).
template <class FluxFn>
DeltaTable darboux_table(int n, FluxFn&& H)
{
    JetSpace space = JetSpace::darboux(n);
    DeltaTable T(space);
    for (int i = 1; i <= n; ++i) {
        // delta is even, so {p_i(t), x^i(s)} = -delta(s-t) = -delta(t-s)
        T.entries[space.position(i)][space.momentum(i)].add({Poly(1), Poly(1), 0});
        T.entries[space.momentum(i)][space.position(i)].add({Poly(-1), Poly(1), 0});
        for (int j = 1; j <= n; ++j) {
            Poly c;
            for (int k = 1; k <= n; ++k)
                c -= H(i, j, k) * space.u(space.position(k), 1);
            T.entries[space.momentum(i)][space.momentum(j)].add({c, Poly(1), 0});
        }
    }
    return T;
}

/// Distributional form of an arbitrary generator table:
/// c_k lambda^k  <->  (-1)^k c_k(s) delta^(k)(t-s).
inline DeltaTable table_from_spec(const BracketSpec& spec)
{
    DeltaTable T(spec.space);
    for (int i = 0; i < spec.space.size(); ++i)
        for (int j = 0; j < spec.space.size(); ++j) {
            const LambdaPoly& e = spec.entry(i, j);
            for (int k = 0; k <= e.degree(); ++k)
                T.entries[i][j].add({Poly(1), e.coeff(k) * Rational(k % 2 ? -1 : 1), k});
        }
    return T;
}

inline DeltaExpr d_t(const DeltaExpr& e, const JetSpace& space)
{
    DeltaExpr r;
    for (auto& t : e.terms) {
        r.add({total_derivative(t.at, space), t.as, t.k});
        r.add({t.at, t.as, t.k + 1});
    }
    return r;
}

inline DeltaExpr d_s(const DeltaExpr& e, const JetSpace& space)
{
    DeltaExpr r;
    for (auto& t : e.terms) {
        r.add({t.at, total_derivative(t.as, space), t.k});
        r.add({-t.at, t.as, t.k + 1});
    }
    return r;
}

inline int top_order(const DiffPoly& f, const JetSpace& space, int gen)
{
    int m = max_jet_order(f, gen);
    if (m < 0 && space.base_index_of(gen))
        m = 0;
    return m;
}

/// {f(t), g(s)} by the Leibniz extension of the generator brackets.
inline DeltaExpr poisson(const DiffPoly& f, const DiffPoly& g, const DeltaTable& T)
{
    const JetSpace& space = T.space;
    DeltaExpr out;
    for (int i = 0; i < space.size(); ++i)
        for (int m = 0; m <= top_order(f, space, i); ++m) {
            DiffPoly F = jet_partial(f, space, i, m);
            if (F.is_zero())
                continue;
            for (int j = 0; j < space.size(); ++j) {
                if (T.entries[i][j].terms.empty())
                    continue;
                for (int n = 0; n <= top_order(g, space, j); ++n) {
                    DiffPoly G = jet_partial(g, space, j, n);
                    if (G.is_zero())
                        continue;
                    DeltaExpr e = T.entries[i][j];
                    for (int a = 0; a < m; ++a)
                        e = d_t(e, space);
                    for (int b = 0; b < n; ++b)
                        e = d_s(e, space);
                    for (auto& t : e.terms)
                        out.add({F * t.at, G * t.as, t.k});
                }
            }
        }
    return out;
}

inline Rational fact(int n)
{
    Rational r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

/// int (t-s)^q a(t) delta^(k)(t-s) dt as a function of s, by Taylor
/// expansion of a about s.
inline DiffPoly moment(const DiffPoly& a, int q, int k, const JetSpace& space)
{
    int c = k - q;
    if (c < 0)
        return DiffPoly();
    Rational w = fact(k) / fact(c) * Rational(k % 2 ? -1 : 1);
    return total_derivative(a, space, c) * w;
}

/// int e^{lambda (t-s)} {f(t), g(s)} dt
inline LambdaPoly fourier(const DeltaExpr& e, const JetSpace& space)
{
    LambdaPoly r;
    for (auto& t : e.terms)
        for (int q = 0; q <= t.k; ++q)
            r.add(q, moment(t.at, q, t.k, space) * t.as * (Rational(1) / fact(q)));
    return r;
}

/// C_j = int (t-s)^j / j! {f(t), g(s)} dt
inline DiffPoly schwinger(const DeltaExpr& e, int j, const JetSpace& space)
{
    DiffPoly r;
    for (auto& t : e.terms)
        r += moment(t.at, j, t.k, space) * t.as * (Rational(1) / fact(j));
    return r;
}

inline LambdaPoly bracket(const DiffPoly& f, const DiffPoly& g, const DeltaTable& T)
{
    return fourier(poisson(f, g, T), T.space);
}

inline std::string to_string(const DeltaExpr& e)
{
    if (e.terms.empty())
        return "0";
    std::string s;
    for (auto& t : e.terms) {
        if (!s.empty())
            s += " + ";
        s += "(" + lbc::to_string(t.at) + ")(t)*(" + lbc::to_string(t.as) + ")(s)*delta";
        s += t.k ? "^(" + std::to_string(t.k) + ")" : "";
        s += "(t-s)";
    }
    return s;
}

} // namespace lbc::oracle
