#pragma once

#include <stdexcept>
#include <string>

namespace lbc {

/// Domain error carrying an optional source position (1-based; 0 = none).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                        ": " + what
                                  : what),
          line_(line), column_(column)
    {
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

} // namespace lbc
