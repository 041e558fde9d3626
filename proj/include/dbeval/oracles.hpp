#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbeval/attributes.hpp"
#include "dbeval/catalog.hpp"
#include "dbeval/pareto.hpp"

namespace dbeval {

class OracleRefused : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kNaiveOracleCap = 5000;

// Quadratic all-pairs nondominance built only on the per-attribute relations.
// Refuses inputs larger than `cap`.
SolutionSet naive_nondominated(const std::vector<Instance>& instances, const ApproxSpec& approx = {},
                               std::size_t cap = kNaiveOracleCap);

struct McEstimate {
    double mean = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double stderr_ = 0.0;
    std::uint64_t seed = 0;
    std::string rng;

    // |mean - expected| <= k * stderr; an exact match always passes.
    bool within(double expected, double k = 3.0) const;
};

struct McOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0x5eed'0001;
    unsigned threads = 0;
};

// Adversary answers every fast-phase round with a uniformly random bit.
McEstimate simulate_random_answer(unsigned n, const McOptions& options = {});

// HK mafia fraud: the adversary pre-asks the prover with guessed challenges and
// replays the answers, guessing whenever the verifier's challenge differs.
McEstimate simulate_hk_mafia(unsigned n, const McOptions& options = {});

// HK distance fraud: the prover answers before the challenge arrives, sending
// the common register bit when both registers agree and a guess otherwise.
// `force_equal_registers` makes both registers identical.
McEstimate simulate_hk_distance(unsigned n, const McOptions& options = {}, bool force_equal_registers = false);

struct OracleCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    McOptions mc;
    unsigned max_rounds = 8;
    unsigned subset_count = 20;
    std::size_t subset_size = 500;
    ApproxSpec approx;
};

// Monte Carlo checks of the closed-form probabilities plus naive-vs-engine
// comparisons on random subsets of the catalog.
std::vector<OracleCheck> run_oracle_suite(const Catalog& catalog, const VerifyOptions& options = {});

}  // namespace dbeval
