#include "dbeval/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dbeval::formulas {

namespace {

const double kLog2ThreeQuarters = std::log2(0.75);

double clamp_probability(double log2p) { return std::min(0.0, log2p); }

// Per-tree distance-fraud exponent for a tree of depth d.
double tree_depth_distance(std::uint32_t d) {
    const double dd = static_cast<double>(d);
    return std::min(dd * kLog2ThreeQuarters, 0.5 * std::log2(1.5) - dd / 2.0);
}

}  // namespace

double log2_sum(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    const double m = std::max(a, b);
    return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

double one(const Params&) { return 0.0; }

double half_pow_n(const Params& p) { return -static_cast<double>(p.n); }

double three_quarters_pow_n(const Params& p) { return p.n * kLog2ThreeQuarters; }

double seven_eighths_pow_n(const Params& p) { return p.n * std::log2(7.0 / 8.0); }

double mp_mafia(const Params& p) {
    const double per_round = std::max(0.75 * (1.0 - p.p_f), (1.0 + p.p_f) / 2.0);
    return p.n * std::log2(per_round);
}

double mp_distance(const Params& p) { return p.n * std::log2((3.0 + p.p_f) / 4.0); }

double tree_mafia(const Params& p) {
    const std::uint32_t k = p.n / p.ell;
    const double ell = static_cast<double>(p.ell);
    return k * (std::log2(ell / 2.0 + 1.0) - ell);
}

// Full trees of depth ell plus one partial tree holding the remaining rounds.
double tree_distance(const Params& p) {
    const std::uint32_t k = p.n / p.ell;
    const std::uint32_t r = p.n % p.ell;
    double v = k * tree_depth_distance(p.ell);
    if (r > 0) v += tree_depth_distance(r);
    return clamp_probability(v);
}

double poulidor_mafia(const Params& p) {
    const double n = static_cast<double>(p.n);
    return clamp_probability(-n - 1.46 + 1.75 * std::sqrt(n));
}

double poulidor_distance(const Params& p) {
    const double n = static_cast<double>(p.n);
    return clamp_probability(-n / 2.0 - 0.4 + 0.75 * std::sqrt(n));
}

// 2 (5/8)^n - (1/2)^n, evaluated as 2 (5/8)^n (1 - (4/5)^n / 2).
double ykhl_mafia(const Params& p) {
    const double n = static_cast<double>(p.n);
    return 1.0 + n * std::log2(5.0 / 8.0) + std::log2(1.0 - 0.5 * std::pow(0.8, n));
}

std::uint32_t ka_alpha(const Params& p) {
    const double scaled = p.p_d * 1e6;
    const double micro = std::round(scaled);
    if (std::fabs(scaled - micro) < 1e-6) {
        const auto m = static_cast<std::uint64_t>(micro);
        return static_cast<std::uint32_t>(m * p.n / 1000000u);
    }
    return static_cast<std::uint32_t>(std::floor(p.p_d * p.n));
}

// Pre-ask adversary: (1/2)^a (3/4)^(n-a) + a (1/2)^(n+1).
double ka_mafia(const Params& p) {
    const std::uint32_t a = ka_alpha(p);
    const double n = static_cast<double>(p.n);
    const double guessed = -static_cast<double>(a) + (n - a) * kLog2ThreeQuarters;
    if (a == 0) return guessed;
    return log2_sum(guessed, std::log2(static_cast<double>(a)) - (n + 1.0));
}

double ka_distance(const Params& p) { return (p.n - ka_alpha(p)) * kLog2ThreeQuarters; }

double ski_mafia(const Params& p) {
    const double t = static_cast<double>(p.t);
    return p.n * std::log2((t + 1.0) / (2.0 * t));
}

double ski_terrorist(const Params& p) {
    const double t = static_cast<double>(p.t);
    return p.n * std::log2((2.0 * t - 2.0) / (2.0 * t));
}

// F(2n+2) / 4^n, F the Fibonacci sequence with F(1) = F(2) = 1.
double tma_fraud(const Params& p) {
    double a = 0.0, b = 1.0;
    double scale = 0.0;  // log2 of the factor pulled out of a and b
    for (std::uint32_t i = 0; i < 2 * p.n + 2; ++i) {
        const double next = a + b;
        a = b;
        b = next;
        if (b > 0x1p500) {
            a *= 0x1p-500;
            b *= 0x1p-500;
            scale += 500.0;
        }
    }
    return std::log2(a) + scale - 2.0 * p.n;
}

}  // namespace dbeval::formulas
