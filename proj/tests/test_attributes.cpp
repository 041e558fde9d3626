#include <doctest.h>

#include <cmath>
#include <limits>

#include "dbeval/attributes.hpp"
#include "dbeval/bound.hpp"

using namespace dbeval;

namespace {

constexpr double kZero = -std::numeric_limits<double>::infinity();

AttributeVector vec(double pm, double pd, double pt, std::uint64_t e, std::uint64_t c, std::uint64_t m, bool s,
                    bool b) {
    return AttributeVector{pm, pd, pt, e, c, m, s, b};
}

}  // namespace

TEST_CASE("attribute keys round-trip") {
    for (Attribute a : kAllAttributes) CHECK(parse_attribute(attribute_key(a)) == a);
    CHECK_FALSE(parse_attribute("q").has_value());
}

TEST_CASE("probability approximate equality is a factor-two window") {
    const Attribute pm = Attribute::MafiaFraud;
    CHECK(approx_equal(pm, -16.0, -16.0));
    CHECK(approx_equal(pm, -16.0, -16.99));
    CHECK_FALSE(approx_equal(pm, -16.0, -17.0));
    CHECK(approx_equal(pm, -16.0, -15.01));
    CHECK_FALSE(approx_equal(pm, -16.0, -15.0));
}

TEST_CASE("probability zero is approximately equal only to itself") {
    const Attribute pd = Attribute::DistanceFraud;
    CHECK(approx_equal(pd, kZero, kZero));
    CHECK_FALSE(approx_equal(pd, kZero, -1000.0));
    CHECK_FALSE(approx_equal(pd, -1000.0, kZero));
    CHECK(strictly_precedes(pd, kZero, -1000.0));
    CHECK_FALSE(strictly_precedes(pd, kZero, kZero));
}

TEST_CASE("counts and booleans use plain equality") {
    CHECK(approx_equal(Attribute::Rounds, 32, 32));
    CHECK_FALSE(approx_equal(Attribute::Rounds, 32, 33));
    CHECK(strictly_precedes(Attribute::CryptoOps, 1, 2));
    CHECK(strictly_precedes(Attribute::SlowPhase, 0, 1));
    CHECK_FALSE(strictly_precedes(Attribute::MultiBit, 1, 0));
}

TEST_CASE("memory tolerance is configurable") {
    CHECK(approx_equal(Attribute::Memory, 0, 1023));
    CHECK_FALSE(approx_equal(Attribute::Memory, 0, 1024));
    const ApproxSpec wide{1.0, 8192.0};
    CHECK(approx_equal(Attribute::Memory, 0, 8000, wide));
    CHECK(strictly_precedes(Attribute::Memory, 0, 8192, wide));
}

TEST_CASE("dominance") {
    const auto bc16 = vec(-16, -16, 0, 32, 2, 416, true, false);
    const auto mad16 = vec(-16, -16, 0, 32, 4, 928, true, false);
    CHECK(dominates(bc16, mad16));
    CHECK_FALSE(dominates(mad16, bc16));
    CHECK_FALSE(dominates(bc16, bc16));

    // Approximately equal vectors do not dominate each other.
    const auto close = vec(-16.5, -16.2, 0, 32, 2, 900, true, false);
    CHECK_FALSE(dominates(bc16, close));
    CHECK_FALSE(dominates(close, bc16));

    // Better on one attribute, worse on another: incomparable.
    const auto fewer_ops = vec(-16, -16, 0, 32, 1, 416, true, true);
    CHECK_FALSE(dominates(bc16, fewer_ops));
    CHECK_FALSE(dominates(fewer_ops, bc16));
}

TEST_CASE("dominance is not transitive") {
    // Each step differs by a sub-window amount on p_m plus a strict gain on
    // rounds; the end points differ by more than the window in the wrong direction.
    const auto x = vec(-15.4, -10, 0, 10, 1, 0, false, false);
    const auto y = vec(-15.8, -10, 0, 12, 1, 0, false, false);
    const auto z = vec(-16.5, -10, 0, 14, 1, 0, false, false);
    CHECK(dominates(x, y));
    CHECK(dominates(y, z));
    CHECK_FALSE(dominates(x, z));
}

TEST_CASE("bounds parse from powers of two and decimals") {
    CHECK(parse_bound("2^-16").log2_value == -16.0);
    CHECK(parse_bound(" 2^(-32) ").log2_value == -32.0);
    CHECK(parse_bound("0.5").log2_value == -1.0);
    CHECK(parse_bound("1").log2_value == 0.0);
    CHECK(std::isinf(parse_bound("0").log2_value));
    CHECK(parse_bound("2^-16").text() == "2^-16");
    CHECK(parse_bound("0.25").text() == "2^-2");
    CHECK(parse_bound("0").text() == "0");
    CHECK(parse_bound("0.3").text() == "0.3");
}

TEST_CASE("bound errors distinguish syntax from range") {
    auto kind = [](const char* s) {
        try {
            parse_bound(s);
        } catch (const BoundError& e) {
            return e.kind();
        }
        FAIL("expected BoundError for " << s);
        return BoundError::Kind::Syntax;
    };
    CHECK(kind("abc") == BoundError::Kind::Syntax);
    CHECK(kind("2^") == BoundError::Kind::Syntax);
    CHECK(kind("") == BoundError::Kind::Syntax);
    CHECK(kind("1.5") == BoundError::Kind::Range);
    CHECK(kind("-0.1") == BoundError::Kind::Range);
    CHECK(kind("2^3") == BoundError::Kind::Range);
}
