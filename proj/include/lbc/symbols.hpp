#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

namespace lbc {

using Rational = mpq_class;

/// n/d in lowest terms (mpq_class does not canonicalize on construction).
inline Rational ratio(long n, long d)
{
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// Variable kinds, listed in canonical print order.
enum class VarKind : std::uint8_t {
    Param, ///< formal scalar parameter (hbar); constant under every derivation
    Atom,  ///< opaque smooth function of the base coordinates
    Coord, ///< base coordinate y^k (forms side)
    Jet,   ///< jet variable u_i^{(m)}
};

struct VarKey {
    VarKind kind = VarKind::Param;
    std::string name;         // atom / param / generator / coordinate prefix
    int gen = 0;              // jet generator index, coordinate index
    int order = 0;            // jet order
    std::vector<int> indices; // atom table indices, normalized
    std::vector<int> derivs;  // atom partial multi-index, sorted

    auto tie() const { return std::tie(kind, gen, order, name, indices, derivs); }
    bool operator==(const VarKey& o) const { return tie() == o.tie(); }
    bool operator<(const VarKey& o) const
    {
        if (kind != o.kind)
            return kind < o.kind;
        switch (kind) {
        case VarKind::Jet:
            return std::tie(gen, order, name) < std::tie(o.gen, o.order, o.name);
        case VarKind::Coord:
            return std::tie(gen, name) < std::tie(o.gen, o.name);
        default:
            return std::tie(name, indices, derivs) < std::tie(o.name, o.indices, o.derivs);
        }
    }
};

struct VarInfo {
    VarKey key;
    bool antisymmetric = false;
};

/// Handle to an interned variable. Equality is identity; ordering is the
/// canonical key order so it is reproducible across runs.
class Var {
public:
    Var() = default;
    explicit Var(const VarInfo* p) : info_(p) {}

    const VarKey& key() const { return info_->key; }
    const VarInfo& info() const { return *info_; }
    VarKind kind() const { return info_->key.kind; }
    bool is_jet() const { return kind() == VarKind::Jet; }
    bool is_atom() const { return kind() == VarKind::Atom; }
    bool is_coord() const { return kind() == VarKind::Coord; }
    bool is_param() const { return kind() == VarKind::Param; }
    const void* id() const { return info_; }

    bool operator==(const Var& o) const { return info_ == o.info_; }
    bool operator!=(const Var& o) const { return info_ != o.info_; }
    bool operator<(const Var& o) const { return info_ != o.info_ && info_->key < o.info_->key; }

private:
    const VarInfo* info_ = nullptr;
};

/// Process-wide interning table. Lookups take a shared lock; insertion is
/// serialized. Interned records are never freed, so handles stay valid.
class SymbolTable {
public:
    static SymbolTable& instance()
    {
        static SymbolTable table;
        return table;
    }

    Var intern(const VarKey& key, bool antisymmetric = false)
    {
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(key);
            if (it != table_.end())
                return Var(it->second.get());
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = table_.try_emplace(key, nullptr);
        if (inserted)
            it->second = std::make_unique<VarInfo>(VarInfo{key, antisymmetric});
        return Var(it->second.get());
    }

private:
    SymbolTable() = default;
    std::shared_mutex mutex_;
    std::map<VarKey, std::unique_ptr<VarInfo>> table_;
};

inline Var jet_var(int gen, int order, const std::string& name)
{
    VarKey k;
    k.kind = VarKind::Jet;
    k.gen = gen;
    k.order = order;
    k.name = name;
    return SymbolTable::instance().intern(k);
}

inline Var coord_var(int index, const std::string& prefix = "y")
{
    VarKey k;
    k.kind = VarKind::Coord;
    k.gen = index;
    k.name = prefix;
    return SymbolTable::instance().intern(k);
}

inline Var param_var(const std::string& name)
{
    VarKey k;
    k.kind = VarKind::Param;
    k.name = name;
    return SymbolTable::instance().intern(k);
}

/// Sign of the permutation sorting `v`, or 0 when it has a repeated entry.
/// `v` is sorted in place.
inline int sort_with_sign(std::vector<int>& v)
{
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j - 1] >= v[j]; --j) {
            if (v[j - 1] == v[j])
                return 0;
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    return sign;
}

/// Interns an atom after index normalization. For antisymmetric tables the
/// returned sign is the permutation sign (0 when an index repeats).
inline std::pair<int, Var> atom_var(const std::string& name, std::vector<int> indices,
                                    std::vector<int> derivs = {}, bool antisymmetric = false)
{
    int sign = 1;
    if (antisymmetric) {
        sign = sort_with_sign(indices);
        if (sign == 0)
            return {0, Var{}};
    }
    std::sort(derivs.begin(), derivs.end());
    VarKey k;
    k.kind = VarKind::Atom;
    k.name = name;
    k.indices = std::move(indices);
    k.derivs = std::move(derivs);
    return {sign, SymbolTable::instance().intern(k, antisymmetric)};
}

/// The atom with one more partial derivative along base coordinate `k`.
inline Var atom_partial(Var atom, int k)
{
    auto derivs = atom.key().derivs;
    derivs.push_back(k);
    return atom_var(atom.key().name, atom.key().indices, std::move(derivs), atom.info().antisymmetric)
        .second;
}

} // namespace lbc

template <>
struct std::hash<lbc::Var> {
    std::size_t operator()(const lbc::Var& v) const noexcept { return std::hash<const void*>{}(v.id()); }
};
