#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "lbc/lambda.hpp"

namespace lbc {

inline Poly hbar() { return Poly(param_var("hbar")); }

/// Degree in hbar of a coefficient (-1 for zero).
inline int hbar_degree(const Poly& c)
{
    int d = -1;
    Var h = param_var("hbar");
    for (auto& [m, q] : c.terms())
        d = std::max(d, static_cast<int>(m.exponent(h)));
    return d;
}

/// [a, b] = int_{-d}^0 {a lambda b} dlambda: the lambda^j coefficient c_j
/// contributes -(-d)^{j+1} c_j / (j+1).
inline DiffPoly lie_bracket(const DiffPoly& a, const DiffPoly& b, const BracketSpec& spec)
{
    LambdaPoly v = lambda_bracket(a, b, spec);
    DiffPoly r;
    for (int j = 0; j <= v.degree(); ++j) {
        if (v.coeff(j).is_zero())
            continue;
        Rational w(j % 2 ? -1 : 1, j + 1);
        w.canonicalize();
        r += total_derivative(v.coeff(j), spec.space, j + 1) * w;
    }
    return spec.relations.reduce(r);
}

/// Every table entry scaled by hbar^degree.
inline BracketSpec hbar_family(const BracketSpec& spec, int degree = 1)
{
    BracketSpec out = spec;
    Poly s = hbar().pow(degree);
    for (auto& row : out.table)
        for (auto& e : row)
            if (e)
                e = s * *e;
    return out;
}

/// Generators of a truncated Lie conformal algebra: each generator comes with
/// its derivatives up to its own order.
class ConformalBasis {
public:
    struct Element {
        std::string name;
        DiffPoly value;
        int generator = 0; ///< construction order
        int dorder = 0;
    };

    explicit ConformalBasis(BracketSpec spec) : spec_(std::move(spec)) {}

    /// Adds g, d g, ..., d^dorder g.
    void add_generator(const std::string& name, const DiffPoly& g, int dorder = 0)
    {
        if (dorder < 0)
            throw Error("derivative order must be nonnegative");
        check_generators(g, spec_.space);
        if (g.is_zero() || g.is_constant())
            throw Error("basis generator '" + name + "' is constant");
        DiffPoly v = g;
        for (int d = 0; d <= dorder; ++d) {
            std::string n = d == 0 ? name : d == 1 ? "d(" + name + ")" : "d" + std::to_string(d) + "(" + name + ")";
            elems_.push_back({n, v, gens_, d});
            v = total_derivative(v, spec_.space);
        }
        ++gens_;
        std::stable_sort(elems_.begin(), elems_.end(), [](const Element& a, const Element& b) {
            return std::tie(a.generator, a.dorder, a.name) < std::tie(b.generator, b.dorder, b.name);
        });
        rebuild();
    }

    /// Checks that the lambda-brackets and the Lie brackets of basis elements
    /// stay in the span (constants count as multiples of the unit).
    void validate() const
    {
        for (auto& a : elems_)
            for (auto& b : elems_) {
                LambdaPoly v = lambda_bracket(a.value, b.value, spec_);
                for (int j = 0; j <= v.degree(); ++j)
                    coordinates(spec_.relations.reduce(v.coeff(j)),
                                "{" + a.name + " lambda " + b.name + "} at lambda^" + std::to_string(j));
                coordinates(lie_bracket(a.value, b.value, spec_), "[" + a.name + ", " + b.name + "]");
            }
    }

    const BracketSpec& spec() const { return spec_; }
    int size() const { return static_cast<int>(elems_.size()); }
    const Element& element(int i) const { return elems_.at(i); }
    const std::vector<Element>& elements() const { return elems_; }

    int index_of(const std::string& name) const
    {
        for (int i = 0; i < size(); ++i)
            if (elems_[i].name == name)
                return i;
        return -1;
    }

    /// (unit coefficient, element coefficients) with v = c0 + sum c_i e_i;
    /// throws when v is outside the span.
    std::pair<Rational, std::vector<Rational>> coordinates(const DiffPoly& v, const std::string& what = "value") const
    {
        std::vector<Rational> c(size());
        DiffPoly rest = v;
        for (auto& [pivot, row] : echelon_) {
            auto it = rest.terms().find(pivot);
            if (it == rest.terms().end())
                continue;
            Rational q = it->second;
            rest -= row.value * q;
            for (int i = 0; i < size(); ++i)
                c[i] += q * row.combo[i];
        }
        Rational c0 = rest.constant_term();
        rest -= Poly(c0);
        if (!rest.is_zero())
            throw Error("truncation failure: " + what + " = " + to_string(v) + " leaves the basis span");
        return {c0, c};
    }

    DiffPoly lie(int a, int b) const { return lie_bracket(elems_.at(a).value, elems_.at(b).value, spec_); }

private:
    struct Row {
        DiffPoly value;
        std::vector<Rational> combo; ///< value = sum combo_i e_i
    };

    void rebuild()
    {
        echelon_.clear();
        for (int i = 0; i < size(); ++i) {
            Row r{elems_[i].value, std::vector<Rational>(size())};
            r.combo[i] = 1;
            Rational c0 = r.value.constant_term();
            r.value -= Poly(c0);
            for (auto& [pivot, row] : echelon_) {
                auto it = r.value.terms().find(pivot);
                if (it == r.value.terms().end())
                    continue;
                Rational q = it->second;
                r.value -= row.value * q;
                for (int k = 0; k < size(); ++k)
                    r.combo[k] -= q * row.combo[k];
            }
            if (r.value.is_zero())
                throw Error("basis element '" + elems_[i].name + "' is linearly dependent on the others");
            auto [pivot, q] = *r.value.terms().begin();
            Monomial pm = pivot;
            Rational inv = 1 / q;
            r.value = r.value * inv;
            for (auto& x : r.combo)
                x *= inv;
            // keep earlier rows reduced against the new pivot
            for (auto& [p, row] : echelon_) {
                auto it = row.value.terms().find(pm);
                if (it == row.value.terms().end())
                    continue;
                Rational s = it->second;
                row.value -= r.value * s;
                for (int k = 0; k < size(); ++k)
                    row.combo[k] -= s * r.combo[k];
            }
            echelon_.emplace_back(pm, std::move(r));
        }
    }

    BracketSpec spec_;
    std::vector<Element> elems_;
    std::vector<std::pair<Monomial, Row>> echelon_;
    int gens_ = 0;
};

using Word = std::vector<int>;

/// Q[hbar]-combination of words over a ConformalBasis.
class EnvElement {
public:
    EnvElement() = default;
    explicit EnvElement(const Word& w, const Poly& c = Poly(1)) { add(w, c); }

    const std::map<Word, Poly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Word& w, const Poly& c)
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

    EnvElement& operator+=(const EnvElement& o)
    {
        for (auto& [w, c] : o.terms_)
            add(w, c);
        return *this;
    }
    friend EnvElement operator+(EnvElement a, const EnvElement& b) { return a += b; }
    friend EnvElement operator-(EnvElement a, const EnvElement& b)
    {
        for (auto& [w, c] : b.terms_)
            a.add(w, -c);
        return a;
    }
    friend EnvElement operator*(const Poly& s, const EnvElement& a)
    {
        EnvElement r;
        for (auto& [w, c] : a.terms_)
            r.add(w, s * c);
        return r;
    }

    /// Concatenation product, extended bilinearly.
    friend EnvElement concat(const EnvElement& a, const EnvElement& b)
    {
        EnvElement r;
        for (auto& [u, c] : a.terms_)
            for (auto& [v, d] : b.terms_) {
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                r.add(w, c * d);
            }
        return r;
    }

    int max_hbar() const
    {
        int d = -1;
        for (auto& [w, c] : terms_)
            d = std::max(d, hbar_degree(c));
        return d;
    }

    bool operator==(const EnvElement&) const = default;

private:
    std::map<Word, Poly> terms_;
};

struct Truncation {
    int max_word = 3;
    int max_hbar = 2;
};

enum class RewriteStrategy { Leftmost, Rightmost };

namespace detail {

inline EnvElement bracket_element(const ConformalBasis& B, int a, int b)
{
    auto [c0, c] = B.coordinates(B.lie(a, b), "[" + B.element(a).name + ", " + B.element(b).name + "]");
    EnvElement r;
    r.add({}, Poly(c0));
    for (int i = 0; i < B.size(); ++i)
        r.add({i}, Poly(c[i]));
    return r;
}

} // namespace detail

/// PBW normal form: b a -> a b + hbar [b, a] at a descent, until every word
/// is nondecreasing in the basis order.
inline EnvElement pbw_normal_form(const EnvElement& e, const ConformalBasis& B, const Truncation& tr = {},
                                  RewriteStrategy strategy = RewriteStrategy::Leftmost)
{
    std::map<std::pair<int, int>, EnvElement> cache;
    auto bracket = [&](int a, int b) -> const EnvElement& {
        auto key = std::make_pair(a, b);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, detail::bracket_element(B, a, b)).first;
        return it->second;
    };

    for (auto& [w, c] : e.terms()) {
        if (static_cast<int>(w.size()) > tr.max_word)
            throw Error("truncation failure: word length " + std::to_string(w.size()) + " exceeds " +
                        std::to_string(tr.max_word));
        for (int i : w)
            if (i < 0 || i >= B.size())
                throw Error("word letter outside the basis");
    }

    EnvElement done, todo = e;
    while (!todo.is_zero()) {
        EnvElement next;
        for (auto& [w, c] : todo.terms()) {
            if (hbar_degree(c) > tr.max_hbar)
                throw Error("truncation failure: hbar-degree " + std::to_string(hbar_degree(c)) + " exceeds " +
                            std::to_string(tr.max_hbar));
            int pos = -1;
            int n = static_cast<int>(w.size());
            if (strategy == RewriteStrategy::Leftmost) {
                for (int k = 0; k + 1 < n && pos < 0; ++k)
                    if (w[k] > w[k + 1])
                        pos = k;
            } else {
                for (int k = n - 2; k >= 0 && pos < 0; --k)
                    if (w[k] > w[k + 1])
                        pos = k;
            }
            if (pos < 0) {
                done.add(w, c);
                continue;
            }
            Word swapped = w;
            std::swap(swapped[pos], swapped[pos + 1]);
            next.add(swapped, c);
            Word head(w.begin(), w.begin() + pos), tail(w.begin() + pos + 2, w.end());
            for (auto& [mid, q] : bracket(w[pos], w[pos + 1]).terms()) {
                Word nw = head;
                nw.insert(nw.end(), mid.begin(), mid.end());
                nw.insert(nw.end(), tail.begin(), tail.end());
                next.add(nw, c * q * hbar());
            }
        }
        todo = std::move(next);
    }
    return done;
}

inline EnvElement pbw_normal_form(const Word& w, const ConformalBasis& B, const Truncation& tr = {},
                                  RewriteStrategy strategy = RewriteStrategy::Leftmost)
{
    return pbw_normal_form(EnvElement(w), B, tr, strategy);
}

/// Normally ordered product: normal form of the concatenation.
inline EnvElement normal_product(const EnvElement& a, const EnvElement& b, const ConformalBasis& B,
                                 const Truncation& tr = {})
{
    Truncation wide = tr;
    for (auto& [u, c] : a.terms())
        for (auto& [v, d] : b.terms())
            wide.max_word = std::max<int>(wide.max_word, u.size() + v.size());
    if (wide.max_word > tr.max_word)
        throw Error("truncation failure: product word longer than " + std::to_string(tr.max_word));
    return pbw_normal_form(concat(a, b), B, tr);
}

/// Element of the symmetric algebra: sorted words (multisets) with rational
/// coefficients.
using SymElement = std::map<Word, Rational>;

/// The hbar -> 0 image of a normal form.
inline SymElement quasiclassical_limit(const EnvElement& e)
{
    SymElement r;
    for (auto& [w, c] : e.terms()) {
        Word m = w;
        std::sort(m.begin(), m.end());
        Rational q;
        for (auto& [mono, k] : c.terms())
            if (mono.degree() == 0)
                q += k;
        if (q == 0)
            continue;
        auto& slot = r[m];
        slot += q;
        if (slot == 0)
            r.erase(m);
    }
    return r;
}

/// (ab - ba)/hbar at hbar = 0, read back as a differential polynomial.
inline DiffPoly recovered_bracket(int a, int b, const ConformalBasis& B, const Truncation& tr = {})
{
    EnvElement comm = pbw_normal_form(Word{a, b}, B, tr) - pbw_normal_form(Word{b, a}, B, tr);
    Var h = param_var("hbar");
    DiffPoly r;
    for (auto& [w, c] : comm.terms()) {
        Rational q;
        for (auto& [mono, k] : c.terms())
            if (mono.degree() == 1 && mono.exponent(h) == 1)
                q += k;
            else if (mono.degree() != 1 || mono.exponent(h) != 1)
                throw Error("commutator not of order hbar");
        if (w.size() > 1)
            throw Error("commutator has a word of length " + std::to_string(w.size()));
        r += (w.empty() ? Poly(1) : B.element(w[0]).value) * q;
    }
    return r;
}

inline std::string to_string(const EnvElement& e, const ConformalBasis& B)
{
    if (e.is_zero())
        return "0";
    std::string s;
    for (auto& [w, c] : e.terms()) {
        std::string word;
        for (int i : w)
            word += (word.empty() ? "" : " (x) ") + B.element(i).name;
        if (word.empty())
            word = "1";
        s += (s.empty() ? "" : " + ") + std::string("(") + to_string(c) + ")*" + word;
    }
    return s;
}

inline std::string to_string(const SymElement& e, const ConformalBasis& B)
{
    if (e.empty())
        return "0";
    std::string s;
    for (auto& [w, c] : e) {
        std::string word;
        for (int i : w)
            word += (word.empty() ? "" : "*") + B.element(i).name;
        s += (s.empty() ? "" : " + ") + std::string("(") + c.get_str() + ")" + (word.empty() ? "" : "*" + word);
    }
    return s;
}

// ---------------------------------------------------------------------------
// checks

inline Residual env_residual(std::string identity, std::string sample, const EnvElement& r, const ConformalBasis& B)
{
    std::string s = to_string(r, B);
    return {std::move(identity), std::move(sample), s, s, r.is_zero(), r.is_zero()};
}

/// Antisymmetry and Jacobi of the Lie bracket on basis elements.
inline CheckReport check_lie(const ConformalBasis& B)
{
    const auto& spec = B.spec();
    CheckReport rep;
    for (int a = 0; a < B.size(); ++a)
        for (int b = 0; b < B.size(); ++b) {
            std::string name = B.element(a).name + " ; " + B.element(b).name;
            rep.items.push_back(make_residual("[a,b] + [b,a] = 0", name, B.lie(a, b) + B.lie(b, a), spec.relations));
        }
    for (int a = 0; a < B.size(); ++a)
        for (int b = 0; b < B.size(); ++b)
            for (int c = 0; c < B.size(); ++c) {
                const DiffPoly &x = B.element(a).value, &y = B.element(b).value, &z = B.element(c).value;
                DiffPoly r = lie_bracket(x, lie_bracket(y, z, spec), spec) - lie_bracket(lie_bracket(x, y, spec), z, spec) -
                             lie_bracket(y, lie_bracket(x, z, spec), spec);
                rep.items.push_back(make_residual("Jacobi in R_Lie", B.element(a).name + " ; " + B.element(b).name +
                                                                         " ; " + B.element(c).name,
                                                  r, spec.relations));
            }
    return rep;
}

/// Both rewrite strategies agree, and the normal form is idempotent, on
/// every word of length <= max_len.
inline CheckReport check_pbw(const ConformalBasis& B, int max_len, const Truncation& tr = {})
{
    CheckReport rep;
    Word w;
    auto rec = [&](auto&& self) -> void {
        if (!w.empty()) {
            std::string name;
            for (int i : w)
                name += (name.empty() ? "" : " ") + B.element(i).name;
            EnvElement l = pbw_normal_form(w, B, tr, RewriteStrategy::Leftmost);
            EnvElement r = pbw_normal_form(w, B, tr, RewriteStrategy::Rightmost);
            rep.items.push_back(env_residual("leftmost = rightmost normal form", name, l - r, B));
            rep.items.push_back(env_residual("normal form is idempotent", name, pbw_normal_form(l, B, tr) - l, B));
        }
        if (static_cast<int>(w.size()) == max_len)
            return;
        for (int i = 0; i < B.size(); ++i) {
            w.push_back(i);
            self(self);
            w.pop_back();
        }
    };
    rec(rec);
    return rep;
}

/// The limit of NF(w) is the commutative monomial of w; (ab - ba)/hbar at
/// hbar = 0 is [a, b].
inline CheckReport check_limit(const ConformalBasis& B, int max_len, const Truncation& tr = {})
{
    CheckReport rep;
    Word w;
    auto rec = [&](auto&& self) -> void {
        if (!w.empty()) {
            std::string name;
            for (int i : w)
                name += (name.empty() ? "" : " ") + B.element(i).name;
            SymElement got = quasiclassical_limit(pbw_normal_form(w, B, tr));
            Word m = w;
            std::sort(m.begin(), m.end());
            SymElement want{{m, Rational(1)}};
            bool ok = got == want;
            rep.items.push_back({"limit of the normal form = commutative product", name, to_string(got, B),
                                 to_string(got, B), ok, ok});
        }
        if (static_cast<int>(w.size()) == max_len)
            return;
        for (int i = 0; i < B.size(); ++i) {
            w.push_back(i);
            self(self);
            w.pop_back();
        }
    };
    rec(rec);
    for (int a = 0; a < B.size(); ++a)
        for (int b = 0; b < B.size(); ++b)
            rep.items.push_back(make_residual("(ab - ba)/hbar at hbar = 0 equals [a,b]",
                                              B.element(a).name + " ; " + B.element(b).name,
                                              recovered_bracket(a, b, B, tr) - B.lie(a, b), B.spec().relations));
    return rep;
}

/// :a:bc:: - :b:ac:: - :(hbar [a,b]) c:
inline Residual check_quasi_commutativity(int a, int b, int c, const ConformalBasis& B, const Truncation& tr = {})
{
    EnvElement ea(Word{a}), eb(Word{b}), ec(Word{c});
    EnvElement lhs = normal_product(ea, normal_product(eb, ec, B, tr), B, tr) -
                     normal_product(eb, normal_product(ea, ec, B, tr), B, tr);
    EnvElement rhs = normal_product(hbar() * detail::bracket_element(B, a, b), ec, B, tr);
    return env_residual("quasi-commutativity", B.element(a).name + " ; " + B.element(b).name + " ; " +
                                                   B.element(c).name,
                        lhs - rhs, B);
}

inline CheckReport check_quasi_commutativity(const ConformalBasis& B, const Truncation& tr = {})
{
    CheckReport rep;
    for (int a = 0; a < B.size(); ++a)
        for (int b = 0; b < B.size(); ++b)
            for (int c = 0; c < B.size(); ++c)
                rep.items.push_back(check_quasi_commutativity(a, b, c, B, tr));
    return rep;
}

} // namespace lbc
