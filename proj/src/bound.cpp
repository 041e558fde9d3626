#include "dbeval/bound.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace dbeval {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

double Bound::probability() const { return std::exp2(log2_value); }

std::string Bound::text() const { return format_log2_probability(log2_value); }

std::string format_decimal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string format_log2_probability(double log2_value) {
    if (std::isinf(log2_value) && log2_value < 0) return "0";
    if (log2_value == std::round(log2_value)) {
        const long long k = static_cast<long long>(log2_value);
        return "2^" + std::to_string(k);
    }
    return format_decimal(std::exp2(log2_value));
}

Bound parse_bound(std::string_view text) {
    const std::string_view s = trim(text);
    double log2v = 0.0;
    if (s.size() > 2 && s[0] == '2' && s[1] == '^') {
        std::string_view exp = s.substr(2);
        if (exp.size() >= 2 && exp.front() == '(' && exp.back() == ')')
            exp = exp.substr(1, exp.size() - 2);
        double k = 0.0;
        if (!parse_double(trim(exp), k))
            throw BoundError(BoundError::Kind::Syntax, "malformed bound '" + std::string(text) + "'");
        log2v = k;
        if (log2v > 0.0)
            throw BoundError(BoundError::Kind::Range,
                             "bound '" + std::string(text) + "' is outside [0, 1]");
    } else {
        double v = 0.0;
        if (!parse_double(s, v))
            throw BoundError(BoundError::Kind::Syntax, "malformed bound '" + std::string(text) + "'");
        if (v < 0.0 || v > 1.0)
            throw BoundError(BoundError::Kind::Range,
                             "bound '" + std::string(text) + "' is outside [0, 1]");
        log2v = v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log2(v);
    }
    return Bound{log2v};
}

}  // namespace dbeval
