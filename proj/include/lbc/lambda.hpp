#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbc/diffpoly.hpp"
#include "lbc/relations.hpp"
#include "lbc/report.hpp"

namespace lbc {

/// Polynomial in lambda with differential-polynomial coefficients.
class LambdaPoly {
public:
    LambdaPoly() = default;
    LambdaPoly(const DiffPoly& c)
    {
        if (!c.is_zero())
            c_.push_back(c);
    }
    explicit LambdaPoly(std::vector<DiffPoly> cs) : c_(std::move(cs)) { trim(); }

    /// c * lambda^k
    static LambdaPoly monomial(const DiffPoly& c, int k)
    {
        LambdaPoly r;
        r.add(k, c);
        return r;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<DiffPoly>& coefficients() const { return c_; }

    DiffPoly coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : DiffPoly(); }

    void add(int k, const DiffPoly& c)
    {
        if (c.is_zero())
            return;
        if (k >= static_cast<int>(c_.size()))
            c_.resize(k + 1);
        c_[k] += c;
        trim();
    }

    LambdaPoly& operator+=(const LambdaPoly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] += o.c_[k];
        trim();
        return *this;
    }
    LambdaPoly& operator-=(const LambdaPoly& o) { return *this += -o; }
    friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
    friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
    friend LambdaPoly operator-(LambdaPoly a)
    {
        for (auto& c : a.c_)
            c = -c;
        return a;
    }
    /// Multiplication by a lambda-free factor.
    friend LambdaPoly operator*(const DiffPoly& f, const LambdaPoly& a)
    {
        LambdaPoly r;
        r.c_.reserve(a.c_.size());
        for (auto& c : a.c_)
            r.c_.push_back(f * c);
        r.trim();
        return r;
    }
    friend LambdaPoly operator*(const LambdaPoly& a, const DiffPoly& f) { return f * a; }

    LambdaPoly times_lambda(int k = 1) const
    {
        if (is_zero())
            return *this;
        LambdaPoly r;
        r.c_.assign(k, DiffPoly());
        r.c_.insert(r.c_.end(), c_.begin(), c_.end());
        return r;
    }

    template <class Fn>
    LambdaPoly map(Fn&& fn) const
    {
        LambdaPoly r;
        for (auto& c : c_)
            r.c_.push_back(fn(c));
        r.trim();
        return r;
    }

    bool operator==(const LambdaPoly& o) const { return c_ == o.c_; }
    bool operator!=(const LambdaPoly& o) const { return !(*this == o); }

private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }
    std::vector<DiffPoly> c_;
};

/// Polynomial in two formal parameters (lambda, mu).
class LambdaMuPoly {
public:
    using Key = std::pair<int, int>;

    const std::map<Key, DiffPoly>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    DiffPoly coeff(int a, int b) const
    {
        auto it = t_.find({a, b});
        return it == t_.end() ? DiffPoly() : it->second;
    }

    void add(int a, int b, const DiffPoly& c)
    {
        if (c.is_zero())
            return;
        auto& slot = t_[{a, b}];
        slot += c;
        if (slot.is_zero())
            t_.erase({a, b});
    }

    LambdaMuPoly& operator+=(const LambdaMuPoly& o)
    {
        for (auto& [k, c] : o.t_)
            add(k.first, k.second, c);
        return *this;
    }
    LambdaMuPoly& operator-=(const LambdaMuPoly& o)
    {
        for (auto& [k, c] : o.t_)
            add(k.first, k.second, -c);
        return *this;
    }
    friend LambdaMuPoly operator+(LambdaMuPoly a, const LambdaMuPoly& b) { return a += b; }
    friend LambdaMuPoly operator-(LambdaMuPoly a, const LambdaMuPoly& b) { return a -= b; }

    template <class Fn>
    LambdaMuPoly map(Fn&& fn) const
    {
        LambdaMuPoly r;
        for (auto& [k, c] : t_)
            r.add(k.first, k.second, fn(c));
        return r;
    }

    bool operator==(const LambdaMuPoly& o) const { return t_ == o.t_; }

private:
    std::map<Key, DiffPoly> t_;
};

inline Rational binomial(long n, long k)
{
    // generalized binomial coefficient n(n-1)...(n-k+1)/k!, any integer n
    if (k < 0)
        return 0;
    Rational r = 1;
    for (long i = 0; i < k; ++i)
        r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

inline Rational factorial(int n)
{
    Rational r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

/// (lambda + d)^k X with d acting on the coefficients of X.
inline LambdaPoly shift_apply(const LambdaPoly& X, int k, const JetSpace& space)
{
    LambdaPoly r;
    for (int rdeg = 0; rdeg <= X.degree(); ++rdeg) {
        DiffPoly dc = X.coeff(rdeg);
        if (dc.is_zero())
            continue;
        for (int s = 0; s <= k; ++s) {
            if (s)
                dc = total_derivative(dc, space);
            if (dc.is_zero())
                break;
            r.add(k - s + rdeg, dc * binomial(k, s));
        }
    }
    return r;
}

/// (-lambda - d)^k X.
inline LambdaPoly neg_shift_apply(const LambdaPoly& X, int k, const JetSpace& space)
{
    LambdaPoly r = shift_apply(X, k, space);
    return k % 2 ? -r : r;
}

/// How products with negative index are read.
enum class NegativeProducts {
    Forbid,              ///< only j >= 0
    DerivationExtension, ///< f_(-j-1) g = (d^j f / j!) g
};

/// Generator lambda-brackets {u_i lambda u_j}. Substituted operators
/// "lambda + d" act on everything to their right.
struct BracketSpec {
    JetSpace space;
    std::vector<std::vector<std::optional<LambdaPoly>>> table;
    RelationSet relations;
    int max_lambda_degree = 8;
    NegativeProducts negative = NegativeProducts::DerivationExtension;

    explicit BracketSpec(JetSpace s = {}) : space(std::move(s))
    {
        table.assign(space.size(), std::vector<std::optional<LambdaPoly>>(space.size()));
    }

    void set(int i, int j, LambdaPoly v) { table.at(i).at(j) = std::move(v); }

    const LambdaPoly& entry(int i, int j) const
    {
        static const LambdaPoly zero;
        auto& e = table.at(i).at(j);
        return e ? *e : zero;
    }

    /// Fills undefined entries from skew-symmetry {u_j l u_i} = -{u_i (-l-d) u_j};
    /// pairs left undefined on both sides become zero.
    void complete_skew()
    {
        int n = space.size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!table[i][j] && table[j][i])
                    table[i][j] = skew_of(*table[j][i]);
        for (auto& row : table)
            for (auto& e : row)
                if (!e)
                    e = LambdaPoly();
    }

    LambdaPoly skew_of(const LambdaPoly& v) const
    {
        LambdaPoly r;
        for (int k = 0; k <= v.degree(); ++k)
            r -= neg_shift_apply(LambdaPoly(v.coeff(k)), k, space);
        return r;
    }

    /// Entries violating skew-symmetry, as (i, j) pairs.
    std::vector<std::pair<int, int>> skew_violations() const
    {
        std::vector<std::pair<int, int>> bad;
        for (int i = 0; i < space.size(); ++i)
            for (int j = i; j < space.size(); ++j)
                if (entry(i, j) != skew_of(entry(j, i)))
                    bad.emplace_back(i, j);
        return bad;
    }
};

inline void check_generators(const DiffPoly& f, const JetSpace& space)
{
    for (auto& v : f.variables()) {
        if (v.is_coord())
            throw Error("coordinate " + to_string(v) + " where a differential polynomial is expected");
        if (v.is_jet() && (v.key().gen >= space.size() || space.names[v.key().gen] != v.key().name))
            throw Error("unknown generator '" + v.key().name + "'");
    }
}

/// {f lambda g} by the master formula.
inline LambdaPoly lambda_bracket(const DiffPoly& f, const DiffPoly& g, const BracketSpec& spec)
{
    const JetSpace& space = spec.space;
    check_generators(f, space);
    check_generators(g, space);
    LambdaPoly out;
    if (f.is_constant() || g.is_constant())
        return out;
    for (int i = 0; i < space.size(); ++i) {
        int mi = max_jet_order(f, i);
        // atoms depend on base generators through order 0
        if (mi < 0 && space.base_index_of(i))
            mi = 0;
        for (int m = 0; m <= mi; ++m) {
            DiffPoly F = jet_partial(f, space, i, m);
            if (F.is_zero())
                continue;
            LambdaPoly A = neg_shift_apply(LambdaPoly(F), m, space);
            for (int j = 0; j < space.size(); ++j) {
                const LambdaPoly& e = spec.entry(i, j);
                if (e.is_zero())
                    continue;
                int nj = max_jet_order(g, j);
                if (nj < 0 && space.base_index_of(j))
                    nj = 0;
                if (nj < 0)
                    continue;
                LambdaPoly B;
                for (int k = 0; k <= e.degree(); ++k)
                    if (!e.coeff(k).is_zero())
                        B += e.coeff(k) * shift_apply(A, k, space);
                for (int n = 0; n <= nj; ++n) {
                    DiffPoly G = jet_partial(g, space, j, n);
                    if (!G.is_zero())
                        out += G * shift_apply(B, n, space);
                }
            }
        }
    }
    if (out.degree() > spec.max_lambda_degree)
        throw Error("lambda-degree " + std::to_string(out.degree()) + " exceeds the truncation " +
                    std::to_string(spec.max_lambda_degree));
    return out;
}

/// {f_{-lambda-d} g} from {f lambda g}'s coefficients.
inline LambdaPoly skew_substitute(const LambdaPoly& v, const JetSpace& space)
{
    LambdaPoly r;
    for (int k = 0; k <= v.degree(); ++k)
        r += neg_shift_apply(LambdaPoly(v.coeff(k)), k, space);
    return r;
}

/// {f_{lambda+d} h}_-> g : sum_k c_k (lambda + d)^k g.
inline LambdaPoly right_apply(const LambdaPoly& v, const DiffPoly& g, const JetSpace& space)
{
    LambdaPoly r;
    for (int k = 0; k <= v.degree(); ++k)
        if (!v.coeff(k).is_zero())
            r += v.coeff(k) * shift_apply(LambdaPoly(g), k, space);
    return r;
}

/// f_(j) g. Negative j per the spec's negative-product mode.
inline DiffPoly jth_product(const DiffPoly& f, const DiffPoly& g, int j, const BracketSpec& spec)
{
    if (j >= 0)
        return lambda_bracket(f, g, spec).coeff(j) * factorial(j);
    if (spec.negative == NegativeProducts::Forbid)
        throw Error("negative product index " + std::to_string(j) + " with negative products disabled");
    int k = -j - 1;
    return total_derivative(f, spec.space, k) * g * (Rational(1) / factorial(k));
}

/// {f lambda {g mu h}} - {g mu {f lambda h}} - {{f lambda g}_{lambda+mu} h}
inline LambdaMuPoly jacobiator(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h, const BracketSpec& spec)
{
    LambdaMuPoly r;
    LambdaPoly gh = lambda_bracket(g, h, spec);
    for (int b = 0; b <= gh.degree(); ++b) {
        LambdaPoly v = lambda_bracket(f, gh.coeff(b), spec);
        for (int a = 0; a <= v.degree(); ++a)
            r.add(a, b, v.coeff(a));
    }
    LambdaPoly fh = lambda_bracket(f, h, spec);
    for (int a = 0; a <= fh.degree(); ++a) {
        LambdaPoly v = lambda_bracket(g, fh.coeff(a), spec);
        for (int b = 0; b <= v.degree(); ++b)
            r.add(a, b, -v.coeff(b));
    }
    LambdaPoly fg = lambda_bracket(f, g, spec);
    for (int a = 0; a <= fg.degree(); ++a) {
        LambdaPoly v = lambda_bracket(fg.coeff(a), h, spec);
        for (int c = 0; c <= v.degree(); ++c) {
            if (v.coeff(c).is_zero())
                continue;
            // lambda^a (lambda + mu)^c
            for (int s = 0; s <= c; ++s)
                r.add(a + s, c - s, -v.coeff(c) * binomial(c, s));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// text form

inline std::string to_string(const LambdaPoly& v, const std::string& var = "lambda")
{
    if (v.is_zero())
        return "0";
    std::string s;
    for (int k = 0; k <= v.degree(); ++k) {
        DiffPoly c = v.coeff(k);
        if (c.is_zero())
            continue;
        std::string part = k == 0 ? to_string(c) : "(" + to_string(c) + ")*" + var + (k > 1 ? "^" + std::to_string(k) : "");
        s += (s.empty() ? "" : " + ") + part;
    }
    return s;
}

inline std::string to_string(const LambdaMuPoly& v)
{
    if (v.is_zero())
        return "0";
    std::string s;
    for (auto& [key, c] : v.terms()) {
        std::string mono;
        if (key.first)
            mono += "lambda" + (key.first > 1 ? "^" + std::to_string(key.first) : std::string());
        if (key.second)
            mono += (mono.empty() ? "" : "*") + std::string("mu") +
                    (key.second > 1 ? "^" + std::to_string(key.second) : std::string());
        std::string part = mono.empty() ? to_string(c) : "(" + to_string(c) + ")*" + mono;
        s += (s.empty() ? "" : " + ") + part;
    }
    return s;
}

// ---------------------------------------------------------------------------
// residual bookkeeping

inline Residual make_residual(std::string identity, std::string sample, const LambdaMuPoly& raw,
                              const RelationSet& rel)
{
    LambdaMuPoly red = raw.map([&rel](const Poly& c) { return rel.reduce(c); });
    return {std::move(identity), std::move(sample), to_string(raw), to_string(red), raw.is_zero(), red.is_zero()};
}

inline Residual make_residual(std::string identity, std::string sample, const LambdaPoly& raw,
                              const RelationSet& rel)
{
    LambdaPoly red = raw.map([&rel](const Poly& c) { return rel.reduce(c); });
    return {std::move(identity), std::move(sample), to_string(raw), to_string(red), raw.is_zero(), red.is_zero()};
}

inline Residual make_residual(std::string identity, std::string sample, const DiffPoly& raw,
                              const RelationSet& rel)
{
    DiffPoly red = rel.reduce(raw);
    return {std::move(identity), std::move(sample), to_string(raw), to_string(red), raw.is_zero(), red.is_zero()};
}

// ---------------------------------------------------------------------------
// axiom checks

inline Residual sesquilinearity_left(const DiffPoly& f, const DiffPoly& g, const BracketSpec& spec)
{
    auto lhs = lambda_bracket(total_derivative(f, spec.space), g, spec);
    auto rhs = -lambda_bracket(f, g, spec).times_lambda();
    return make_residual("sesquilinearity (left)", to_string(f) + " ; " + to_string(g), lhs - rhs, spec.relations);
}

inline Residual sesquilinearity_right(const DiffPoly& f, const DiffPoly& g, const BracketSpec& spec)
{
    auto lhs = lambda_bracket(f, total_derivative(g, spec.space), spec);
    auto rhs = shift_apply(lambda_bracket(f, g, spec), 1, spec.space);
    return make_residual("sesquilinearity (right)", to_string(f) + " ; " + to_string(g), lhs - rhs, spec.relations);
}

inline Residual skew_symmetry(const DiffPoly& f, const DiffPoly& g, const BracketSpec& spec)
{
    auto r = lambda_bracket(f, g, spec) + skew_substitute(lambda_bracket(g, f, spec), spec.space);
    return make_residual("skew-symmetry", to_string(f) + " ; " + to_string(g), r, spec.relations);
}

inline Residual left_leibniz(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h, const BracketSpec& spec)
{
    auto r = lambda_bracket(f, g * h, spec) - lambda_bracket(f, g, spec) * h - g * lambda_bracket(f, h, spec);
    return make_residual("left Leibniz", to_string(f) + " ; " + to_string(g) + " ; " + to_string(h), r,
                         spec.relations);
}

inline Residual right_leibniz(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h, const BracketSpec& spec)
{
    auto r = lambda_bracket(f * g, h, spec) - right_apply(lambda_bracket(f, h, spec), g, spec.space) -
             right_apply(lambda_bracket(g, h, spec), f, spec.space);
    return make_residual("right Leibniz", to_string(f) + " ; " + to_string(g) + " ; " + to_string(h), r,
                         spec.relations);
}

inline Residual jacobi_identity(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h, const BracketSpec& spec)
{
    return make_residual("Jacobi", to_string(f) + " ; " + to_string(g) + " ; " + to_string(h),
                         jacobiator(f, g, h, spec), spec.relations);
}

struct SuiteOptions {
    bool sesquilinearity = true;
    bool skew = true;
    bool leibniz = true;
    bool jacobi = true;
};

/// All pairwise and triple-wise axiom residuals over the sample.
inline CheckReport check_axiom_suite(const BracketSpec& spec, const std::vector<DiffPoly>& sample,
                                     SuiteOptions opt = {})
{
    CheckReport rep;
    for (auto& f : sample)
        for (auto& g : sample) {
            if (opt.sesquilinearity) {
                rep.items.push_back(sesquilinearity_left(f, g, spec));
                rep.items.push_back(sesquilinearity_right(f, g, spec));
            }
            if (opt.skew)
                rep.items.push_back(skew_symmetry(f, g, spec));
            for (auto& h : sample) {
                if (opt.leibniz) {
                    rep.items.push_back(left_leibniz(f, g, h, spec));
                    rep.items.push_back(right_leibniz(f, g, h, spec));
                }
                if (opt.jacobi)
                    rep.items.push_back(jacobi_identity(f, g, h, spec));
            }
        }
    return rep;
}

/// Residual of
///   sum_j C(m,j) (a_(n+j) b)_(m+p-j) c
///     - sum_j (-1)^j C(n,j) [ a_(m+n-j)(b_(p+j) c) - (-1)^n b_(n+p-j)(a_(m+j) c) ].
/// Sums with infinitely many binomial terms are cut at the spec's truncation;
/// a nonzero contribution at the cut is an error.
inline Residual check_borcherds(const DiffPoly& a, const DiffPoly& b, const DiffPoly& c, int m, int n, int p,
                                const BracketSpec& spec)
{
    int T = spec.max_lambda_degree;
    if (std::abs(m) > T || std::abs(n) > T || std::abs(p) > T)
        throw Error("Borcherds window exceeds the truncation " + std::to_string(T));
    auto prod = [&](const DiffPoly& x, const DiffPoly& y, int j) { return jth_product(x, y, j, spec); };
    auto sum_to = [&](int top, auto&& term) {
        DiffPoly s;
        for (int j = 0; j <= top; ++j)
            s += term(j);
        return s;
    };
    // finite sums when the upper argument is nonnegative, else the truncated series
    auto finite = [&](long upper, int cap) { return upper >= 0 ? static_cast<int>(upper) : cap; };
    int cap = 2 * T + 2;

    auto lhs_term = [&](int j) {
        Rational bc = binomial(m, j);
        if (bc == 0)
            return DiffPoly();
        DiffPoly ab = prod(a, b, n + j);
        return ab.is_zero() ? DiffPoly() : prod(ab, c, m + p - j) * bc;
    };
    auto rhs_term = [&](int j) {
        Rational bc = binomial(n, j) * (j % 2 ? -1 : 1);
        if (bc == 0)
            return DiffPoly();
        DiffPoly t1 = prod(a, prod(b, c, p + j), m + n - j);
        DiffPoly t2 = prod(b, prod(a, c, m + j), n + p - j) * Rational(n % 2 ? -1 : 1);
        return (t1 - t2) * bc;
    };
    int lt = finite(m, cap), rt = finite(n, cap);
    if (m < 0 && !lhs_term(lt + 1).is_zero())
        throw Error("Borcherds sum does not terminate within the truncation");
    if (n < 0 && !rhs_term(rt + 1).is_zero())
        throw Error("Borcherds sum does not terminate within the truncation");
    DiffPoly r = sum_to(lt, lhs_term) - sum_to(rt, rhs_term);
    std::string sample = to_string(a) + " ; " + to_string(b) + " ; " + to_string(c) + " ; (m,n,p)=(" +
                         std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(p) + ")";
    return make_residual("Borcherds", sample, r, spec.relations);
}

/// (d f)_(j) g + j f_(j-1) g, the translation covariance residual.
inline Residual translation_covariance(const DiffPoly& f, const DiffPoly& g, int j, const BracketSpec& spec)
{
    DiffPoly r = jth_product(total_derivative(f, spec.space), g, j, spec);
    if (j != 0)
        r += jth_product(f, g, j - 1, spec) * Rational(j);
    return make_residual("translation covariance", to_string(f) + " ; " + to_string(g) + " ; j=" + std::to_string(j),
                         r, spec.relations);
}

} // namespace lbc
