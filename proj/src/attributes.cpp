#include "dbeval/attributes.hpp"

#include <cmath>

namespace dbeval {

std::string_view attribute_key(Attribute a) {
    switch (a) {
        case Attribute::MafiaFraud: return "p_m";
        case Attribute::DistanceFraud: return "p_d";
        case Attribute::TerroristFraud: return "p_t";
        case Attribute::Rounds: return "e";
        case Attribute::CryptoOps: return "c";
        case Attribute::Memory: return "m";
        case Attribute::SlowPhase: return "s";
        case Attribute::MultiBit: return "b";
    }
    return "?";
}

std::string_view attribute_label(Attribute a) {
    switch (a) {
        case Attribute::MafiaFraud: return "mafia fraud";
        case Attribute::DistanceFraud: return "distance fraud";
        case Attribute::TerroristFraud: return "terrorist fraud";
        case Attribute::Rounds: return "rounds";
        case Attribute::CryptoOps: return "crypto ops";
        case Attribute::Memory: return "memory";
        case Attribute::SlowPhase: return "final slow phase";
        case Attribute::MultiBit: return "multi-bit";
    }
    return "?";
}

std::optional<Attribute> parse_attribute(std::string_view key) {
    for (Attribute a : kAllAttributes)
        if (attribute_key(a) == key) return a;
    return std::nullopt;
}

AttributeKind attribute_kind(Attribute a) {
    switch (a) {
        case Attribute::MafiaFraud:
        case Attribute::DistanceFraud:
        case Attribute::TerroristFraud: return AttributeKind::Probability;
        case Attribute::Rounds:
        case Attribute::CryptoOps: return AttributeKind::Count;
        case Attribute::Memory: return AttributeKind::Memory;
        case Attribute::SlowPhase:
        case Attribute::MultiBit: return AttributeKind::Boolean;
    }
    return AttributeKind::Count;
}

double AttributeVector::value(Attribute a) const {
    switch (a) {
        case Attribute::MafiaFraud: return log2_p_m;
        case Attribute::DistanceFraud: return log2_p_d;
        case Attribute::TerroristFraud: return log2_p_t;
        case Attribute::Rounds: return static_cast<double>(rounds);
        case Attribute::CryptoOps: return static_cast<double>(crypto_ops);
        case Attribute::Memory: return static_cast<double>(memory_bits);
        case Attribute::SlowPhase: return slow_phase ? 1.0 : 0.0;
        case Attribute::MultiBit: return multi_bit ? 1.0 : 0.0;
    }
    return 0.0;
}

bool approx_equal(Attribute a, double x, double y, const ApproxSpec& spec) {
    switch (attribute_kind(a)) {
        case AttributeKind::Probability:
            if (std::isinf(x) || std::isinf(y)) return x == y;
            return x == y || std::fabs(x - y) < spec.probability_log2_window;
        case AttributeKind::Memory:
            return x == y || std::fabs(x - y) < spec.memory_tolerance;
        case AttributeKind::Count:
        case AttributeKind::Boolean:
            return x == y;
    }
    return false;
}

bool strictly_precedes(Attribute a, double x, double y, const ApproxSpec& spec) {
    return x < y && !approx_equal(a, x, y, spec);
}

bool precedes_or_approx(Attribute a, double x, double y, const ApproxSpec& spec) {
    return x < y || approx_equal(a, x, y, spec);
}

bool dominates(const AttributeVector& x, const AttributeVector& y, const ApproxSpec& spec) {
    bool strict = false;
    for (Attribute a : kAllAttributes) {
        const double xv = x.value(a);
        const double yv = y.value(a);
        if (!precedes_or_approx(a, xv, yv, spec)) return false;
        if (strictly_precedes(a, xv, yv, spec)) strict = true;
    }
    return strict;
}

}  // namespace dbeval
