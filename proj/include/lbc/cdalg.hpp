#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "lbc/lambda.hpp"

namespace lbc {

/// Weak Courant-Dorfman structure read off a lambda-bracket: Dorfman bracket
/// = 0-th product, pairing from the higher products, derivation = d.
class CDStructure {
public:
    explicit CDStructure(const BracketSpec& spec) : spec_(spec) {}

    const BracketSpec& spec() const { return spec_; }
    const JetSpace& space() const { return spec_.space; }

    DiffPoly d(const DiffPoly& f) const { return total_derivative(f, spec_.space); }

    DiffPoly dorfman(const DiffPoly& f, const DiffPoly& g) const { return lambda_bracket(f, g, spec_).coeff(0); }

    /// sum_{j>=1} (-d)^{j-1}/j! (f_(j) g + g_(j) f), the symmetrized sum as
    /// written; it equals twice the pairing that satisfies axiom (2).
    DiffPoly pairing_sum(const DiffPoly& f, const DiffPoly& g) const
    {
        LambdaPoly a = lambda_bracket(f, g, spec_), b = lambda_bracket(g, f, spec_);
        int top = std::max(a.degree(), b.degree());
        DiffPoly r;
        for (int j = top; j >= 1; --j) {
            // Horner in (-d): r = -d(r) + c_j
            r = -d(r) + a.coeff(j) + b.coeff(j);
        }
        return r;
    }

    /// The pairing normalized so that [[f,g]] + [[g,f]] = d<f,g>.
    DiffPoly pairing(const DiffPoly& f, const DiffPoly& g) const
    {
        return pairing_sum(f, g) * Rational(1, 2);
    }

    DiffPoly courant(const DiffPoly& f, const DiffPoly& g) const
    {
        return dorfman(f, g) - d(pairing(f, g)) * Rational(1, 2);
    }

    DiffPoly nijenhuis(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h) const
    {
        return (pairing(courant(f, g), h) + pairing(courant(g, h), f) + pairing(courant(h, f), g)) * Rational(1, 3);
    }

    DiffPoly courant_jacobiator(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h) const
    {
        return courant(f, courant(g, h)) + courant(g, courant(h, f)) + courant(h, courant(f, g));
    }

    /// [C_1, ..., C_jmax] with C_j = f_(j) g / j!
    std::vector<DiffPoly> schwinger_coefficients(const DiffPoly& f, const DiffPoly& g, int j_max) const
    {
        std::vector<DiffPoly> out;
        for (int j = 1; j <= j_max; ++j)
            out.push_back(jth_product(f, g, j, spec_) * (Rational(1) / factorial(j)));
        return out;
    }

private:
    const BracketSpec& spec_;
};

inline std::string sample_name(std::initializer_list<DiffPoly> xs)
{
    std::string s;
    for (auto& x : xs)
        s += (s.empty() ? "" : " ; ") + to_string(x);
    return s;
}

/// Axiom residuals on one triple (f, g, h) with a = f, b = g for the
/// axioms taking elements of R.
inline CheckReport check_weak_cd(const CDStructure& cd, const DiffPoly& f, const DiffPoly& g, const DiffPoly& h)
{
    const auto& rel = cd.spec().relations;
    CheckReport rep;
    std::string name = sample_name({f, g, h});
    rep.items.push_back(make_residual(
        "(1) Dorfman Jacobi", name,
        cd.dorfman(f, cd.dorfman(g, h)) - cd.dorfman(cd.dorfman(f, g), h) - cd.dorfman(g, cd.dorfman(f, h)), rel));
    rep.items.push_back(make_residual("(2) symmetric part", name,
                                      cd.dorfman(f, g) + cd.dorfman(g, f) - cd.d(cd.pairing(f, g)), rel));
    rep.items.push_back(make_residual("(3) exact left slot", name, cd.dorfman(cd.d(f), g), rel));
    rep.items.push_back(make_residual(
        "(7) weak invariance", name,
        cd.d(cd.pairing(f, cd.d(cd.pairing(g, h))) - cd.pairing(cd.dorfman(f, g), h) -
             cd.pairing(g, cd.dorfman(f, h))),
        rel));
    rep.items.push_back(make_residual("(8) weak isotropy", name, cd.d(cd.pairing(cd.d(f), cd.d(g))), rel));
    return rep;
}

inline CheckReport check_weak_cd(const CDStructure& cd, const std::vector<std::tuple<DiffPoly, DiffPoly, DiffPoly>>& triples)
{
    CheckReport rep;
    for (auto& [f, g, h] : triples)
        rep.merge(check_weak_cd(cd, f, g, h));
    return rep;
}

/// c with a = c b, if one exists (b nonzero).
inline std::optional<Rational> proportionality(const DiffPoly& a, const DiffPoly& b)
{
    if (b.is_zero())
        return std::nullopt;
    auto& [m, q] = *b.terms().begin();
    auto it = a.terms().find(m);
    if (it == a.terms().end())
        return a.is_zero() ? std::optional<Rational>(0) : std::nullopt;
    Rational c = it->second / q;
    if (a == b * c)
        return c;
    return std::nullopt;
}

/// Courant-Jacobiator minus d Nij, with d read as the derivation of the
/// algebra. When the residual is nonzero but the Jacobiator is a multiple of
/// d Nij, the observed factor is recorded.
inline CheckReport check_nijenhuis(const CDStructure& cd, const DiffPoly& f, const DiffPoly& g, const DiffPoly& h)
{
    DiffPoly jac = cd.courant_jacobiator(f, g, h);
    DiffPoly dnij = cd.d(cd.nijenhuis(f, g, h));
    CheckReport rep;
    rep.items.push_back(
        make_residual("Courant Jacobiator = d Nij", sample_name({f, g, h}), jac - dnij, cd.spec().relations));
    if (!rep.ok())
        if (auto c = proportionality(jac, dnij))
            rep.facts["observed Jacobiator / d Nij"] = c->get_str();
    return rep;
}

/// j! C_j against the lambda-Taylor coefficients, j = 1..j_max.
inline Residual check_schwinger(const CDStructure& cd, const DiffPoly& f, const DiffPoly& g, int j_max)
{
    LambdaPoly v = lambda_bracket(f, g, cd.spec());
    auto cs = cd.schwinger_coefficients(f, g, j_max);
    LambdaPoly diff;
    for (int j = 1; j <= j_max; ++j)
        diff.add(j, cs[j - 1] - v.coeff(j));
    for (int j = j_max + 1; j <= v.degree(); ++j)
        diff.add(j, -v.coeff(j));
    return make_residual("Schwinger coefficients = lambda-Taylor coefficients", sample_name({f, g}), diff,
                         cd.spec().relations);
}

} // namespace lbc
