#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbeval/attributes.hpp"
#include "dbeval/catalog.hpp"

namespace dbeval {

// D[y]: instances whose mafia-fraud probability is at most y (inclusive).
std::vector<Instance> filter_mafia_bound(const std::vector<Instance>& instances, double log2_y);

struct EngineOptions {
    ApproxSpec approx;
    unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct SolutionSet {
    std::vector<Instance> members;  // ordered by instance_less
    std::string source;             // "engine" or "naive-oracle"

    std::map<std::string, std::size_t> totals() const;
    std::vector<std::string> member_ids() const;
};

// Nondominated subset. Candidates are scanned in order of increasing rounds:
// a dominator can never have more rounds than the instance it dominates.
SolutionSet nondominated(const std::vector<Instance>& instances, const EngineOptions& options = {});

// Which member stands for its protocol in a summary.
//   LargestMafia: the member with the largest mafia-fraud probability, i.e. the
//                 one that just meets the bound; ties by fewer rounds, then parameters.
//   FewestBits:   the member with the least memory; ties by fewer rounds, then parameters.
enum class RepresentativeRule { LargestMafia, FewestBits };

std::string_view representative_rule_name(RepresentativeRule r);
std::optional<RepresentativeRule> parse_representative_rule(std::string_view s);

struct Representative {
    Instance instance;
    std::size_t total = 0;  // members of the same protocol
};

// One row per protocol present in the set, ordered by protocol name.
std::vector<Representative> representatives(const SolutionSet& set,
                                            RepresentativeRule rule = RepresentativeRule::LargestMafia);

}  // namespace dbeval
