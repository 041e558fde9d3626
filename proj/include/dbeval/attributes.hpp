#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace dbeval {

enum class Attribute {
    MafiaFraud,
    DistanceFraud,
    TerroristFraud,
    Rounds,
    CryptoOps,
    Memory,
    SlowPhase,
    MultiBit,
};

enum class AttributeKind { Probability, Count, Memory, Boolean };

inline constexpr std::array<Attribute, 8> kAllAttributes = {
    Attribute::MafiaFraud, Attribute::DistanceFraud, Attribute::TerroristFraud,
    Attribute::Rounds,     Attribute::CryptoOps,     Attribute::Memory,
    Attribute::SlowPhase,  Attribute::MultiBit,
};

// Short keys used in files and JSON: p_m, p_d, p_t, e, c, m, s, b.
std::string_view attribute_key(Attribute a);
std::string_view attribute_label(Attribute a);
std::optional<Attribute> parse_attribute(std::string_view key);
AttributeKind attribute_kind(Attribute a);

// Probabilities are held as log2 values; probability 0 is -infinity.
struct AttributeVector {
    double log2_p_m = 0.0;
    double log2_p_d = 0.0;
    double log2_p_t = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t crypto_ops = 0;
    std::uint64_t memory_bits = 0;
    bool slow_phase = false;
    bool multi_bit = false;

    // Probabilities as log2, counts and memory as-is, booleans as 0 or 1.
    double value(Attribute a) const;

    bool operator==(const AttributeVector&) const = default;
};

struct ApproxSpec {
    double probability_log2_window = 1.0;  // x ~ y iff x == y or |log2 x - log2 y| < window
    double memory_tolerance = 1024.0;      // bits; 0 means exact equality
};

bool approx_equal(Attribute a, double x, double y, const ApproxSpec& spec = {});
bool strictly_precedes(Attribute a, double x, double y, const ApproxSpec& spec = {});
bool precedes_or_approx(Attribute a, double x, double y, const ApproxSpec& spec = {});

// x dominates y: x is no worse (up to approximate equality) on every
// attribute and strictly better on at least one.
bool dominates(const AttributeVector& x, const AttributeVector& y, const ApproxSpec& spec = {});

}  // namespace dbeval
