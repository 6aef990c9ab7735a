#pragma once

// JSON configuration files: flux tables, dual pairs, conformal bases,
// coframes and generic bracket tables. Every document may carry
// "schema": 1; other schema versions are rejected.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "lbc/io/eval.hpp"
#include "lbc/quantize.hpp"
#include "lbc/sigma.hpp"
#include "lbc/tduality.hpp"

namespace lbc::io {

using nlohmann::json;

inline json load_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
    if (j.contains("schema") && j["schema"] != 1)
        throw Error(path + ": unsupported schema " + j["schema"].dump());
    return j;
}

namespace detail {

template <class T>
T field(const json& j, const char* key)
{
    if (!j.contains(key))
        throw Error(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("field '") + key + "' has the wrong type");
    }
}

inline Poly value(const json& v, int n, const std::string& prefix)
{
    if (v.is_number_integer())
        return Poly(Rational(v.get<long>()));
    if (v.is_string())
        return read_coefficient(v.get<std::string>(), n, prefix);
    throw Error("table values must be integers or expression strings");
}

} // namespace detail

/// {"dim": 3, "symbolic": "H"} or {"dim": 3, "entries": [{"index": [1,2,3], "value": "2"}]}
inline Flux flux_from_json(const json& j, bool closed)
{
    int n = detail::field<int>(j, "dim");
    if (n < 1)
        throw Error("flux dimension must be at least 1");
    if (j.contains("symbolic"))
        return Flux::symbolic(n, closed, detail::field<std::string>(j, "symbolic"));
    std::vector<std::pair<std::vector<int>, Poly>> entries;
    if (j.contains("entries"))
        for (auto& e : j.at("entries"))
            entries.emplace_back(detail::field<std::vector<int>>(e, "index"), detail::value(e.at("value"), n, "x"));
    return Flux::explicit_entries(n, entries, closed);
}

inline TableSpec table_from_json(const json& j, int n, int rank)
{
    if (j.is_null())
        return TableSpec::zero();
    if (j.is_string() || j.is_number())
        throw Error("a form table is an object with \"symbolic\" or \"entries\"");
    if (j.contains("symbolic"))
        return TableSpec::symbolic(detail::field<std::string>(j, "symbolic"));
    FormTerms t;
    if (j.contains("entries"))
        for (auto& e : j.at("entries")) {
            auto idx = detail::field<std::vector<int>>(e, "index");
            if (static_cast<int>(idx.size()) != rank)
                throw Error("table entry needs " + std::to_string(rank) + " indices");
            for (int& k : idx) {
                if (k < 1 || k > n)
                    throw Error("table index " + std::to_string(k) + " outside 1.." + std::to_string(n));
                k -= 1;
            }
            int s = sort_with_sign(idx);
            if (!s)
                continue;
            t[idx] += detail::value(e.at("value"), n, "y") * Rational(s);
        }
    return TableSpec::explicit_terms(t);
}

/// {"base_dim": n, "F": table, "Fhat": table, "Omega": table}; a missing
/// table is zero.
inline DualPair pair_from_json(const json& j)
{
    int n = detail::field<int>(j, "base_dim");
    auto tab = [&](const char* k, int rank) { return table_from_json(j.contains(k) ? j.at(k) : json(), n, rank); };
    return build_pair(n, tab("F", 2), tab("Fhat", 2), tab("Omega", 3));
}

/// {"dim": n, "flux": flux, "generators": [{"name", "expr", "dorder"}]};
/// the ambient bracket is the twisted Darboux one.
inline ConformalBasis basis_from_json(const json& j, int max_dorder = 8)
{
    int n = detail::field<int>(j, "dim");
    json fj = j.contains("flux") ? j.at("flux") : json{{"dim", n}};
    if (!fj.contains("dim"))
        fj["dim"] = n;
    Flux H = flux_from_json(fj, true);
    ConformalBasis B(darboux_spec(n, H));
    for (auto& g : j.at("generators")) {
        int d = g.contains("dorder") ? g.at("dorder").get<int>() : 0;
        if (d > max_dorder)
            throw Error("generator '" + g.at("name").get<std::string>() + "' exceeds the derivative truncation " +
                        std::to_string(max_dorder));
        B.add_generator(detail::field<std::string>(g, "name"),
                        read_diffpoly(detail::field<std::string>(g, "expr"), B.spec().space), d);
    }
    B.validate();
    return B;
}

/// {"base_dim": n, "coord_prefix": "y", "generators": [{"name": "A", "degree": 1, "d": "..."}],
///  "relations": [{"name": "F", "rank": 2}]}; relations declare closed tables.
inline CoframePtr coframe_from_json(const json& j)
{
    int n = detail::field<int>(j, "base_dim");
    std::string prefix = j.contains("coord_prefix") ? j.at("coord_prefix").get<std::string>() : "y";
    auto cf = std::make_shared<Coframe>(n, prefix, "d" + prefix);
    if (j.contains("relations"))
        for (auto& r : j.at("relations"))
            cf->relations().add_closed(detail::field<std::string>(r, "name"), detail::field<int>(r, "rank"));
    if (j.contains("generators")) {
        // differentials may mention earlier generators only
        for (auto& g : j.at("generators")) {
            if (g.contains("degree") && g.at("degree") != 1)
                throw Error("only degree-1 coframe generators are supported");
            std::string name = detail::field<std::string>(g, "name");
            FormTerms d;
            if (g.contains("d"))
                d = read_form(detail::field<std::string>(g, "d"), cf).terms();
            for (auto& [w, c] : d)
                if (w.size() != 2)
                    throw Error("the differential of '" + name + "' must be a 2-form");
            cf->add_generator(name, d);
        }
    }
    return cf;
}

/// {"generators": ["u", ...], "base": ["x1", ...], "brackets": [{"left": "u", "right": "u",
///  "lambda": ["c0", "c1", ...]}], "relations": [...]}; missing entries are completed by
/// skew-symmetry.
inline BracketSpec spec_from_json(const json& j)
{
    JetSpace space;
    space.names = detail::field<std::vector<std::string>>(j, "generators");
    if (j.contains("base"))
        for (auto& b : j.at("base")) {
            int g = space.index_of(b.get<std::string>());
            if (g < 0)
                throw Error("base generator '" + b.get<std::string>() + "' is not a generator");
            space.base_generator.push_back(g);
        }
    BracketSpec spec(space);
    if (j.contains("relations"))
        for (auto& r : j.at("relations"))
            spec.relations.add_closed(detail::field<std::string>(r, "name"), detail::field<int>(r, "rank"));
    for (auto& b : j.at("brackets")) {
        int l = space.index_of(detail::field<std::string>(b, "left"));
        int r = space.index_of(detail::field<std::string>(b, "right"));
        if (l < 0 || r < 0)
            throw Error("bracket entry names an unknown generator");
        std::vector<DiffPoly> cs;
        for (auto& c : b.at("lambda"))
            cs.push_back(c.is_number_integer() ? DiffPoly(Rational(c.get<long>()))
                                               : read_diffpoly(c.get<std::string>(), spec.space));
        spec.set(l, r, LambdaPoly(cs));
    }
    spec.complete_skew();
    auto bad = spec.skew_violations();
    if (!bad.empty())
        throw Error("bracket table violates skew-symmetry at (" + space.names[bad[0].first] + ", " +
                    space.names[bad[0].second] + ")");
    return spec;
}

} // namespace lbc::io
