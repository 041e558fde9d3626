#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbeval {

class BoundError : public std::invalid_argument {
public:
    enum class Kind { Syntax, Range };
    BoundError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// A probability bound such as "2^-16" or "0.25", held as log2.
struct Bound {
    double log2_value = 0.0;

    double probability() const;
    // "2^-16" when the exponent is an integer, "0" for zero, otherwise the decimal value.
    std::string text() const;
};

// Throws BoundError: Syntax for unparsable text, Range for values outside [0, 1].
Bound parse_bound(std::string_view text);

// Formats a log2 probability the same way Bound::text does.
std::string format_log2_probability(double log2_value);

// Shortest round-tripping decimal for a double.
std::string format_decimal(double v);

}  // namespace dbeval
