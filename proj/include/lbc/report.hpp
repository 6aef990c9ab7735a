#pragma once

#include <map>
#include <string>
#include <vector>

namespace lbc {

/// One checked identity instance. `raw` is the residual as computed, `reduced`
/// the residual after the declared rewrite relations; success means the
/// reduced residual is zero.
struct Residual {
    std::string identity;
    std::string sample;
    std::string raw;
    std::string reduced;
    bool raw_zero = true;
    bool zero = true;
};

struct CheckReport {
    std::vector<Residual> items;
    std::map<std::string, std::string> facts; ///< reported quantities such as the sign sigma

    bool ok() const
    {
        for (auto& r : items)
            if (!r.zero)
                return false;
        return true;
    }

    const Residual* first_failure() const
    {
        for (auto& r : items)
            if (!r.zero)
                return &r;
        return nullptr;
    }

    void merge(const CheckReport& o)
    {
        items.insert(items.end(), o.items.begin(), o.items.end());
        for (auto& [k, v] : o.facts)
            facts[k] = v;
    }

    std::size_t failures() const
    {
        std::size_t n = 0;
        for (auto& r : items)
            n += !r.zero;
        return n;
    }
};

} // namespace lbc
