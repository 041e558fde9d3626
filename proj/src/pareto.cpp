#include "dbeval/pareto.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace dbeval {

namespace {

// Flattened attribute rows for the inner loop.
struct Row {
    double p[3];
    double rounds, crypto, memory;
    bool slow, multi;
};

Row flatten(const AttributeVector& v) {
    return Row{{v.log2_p_m, v.log2_p_d, v.log2_p_t},
               static_cast<double>(v.rounds),
               static_cast<double>(v.crypto_ops),
               static_cast<double>(v.memory_bits),
               v.slow_phase,
               v.multi_bit};
}

bool row_dominates(const Row& x, const Row& y, const ApproxSpec& spec) {
    bool strict = false;
    for (int k = 0; k < 3; ++k) {
        const double a = x.p[k], b = y.p[k];
        if (std::isinf(a) || std::isinf(b)) {
            if (a == b) continue;
            if (a > b) return false;
            strict = true;
            continue;
        }
        const double d = a - b;
        if (d >= spec.probability_log2_window) return false;
        if (d <= -spec.probability_log2_window) strict = true;
    }
    if (x.crypto > y.crypto || x.slow > y.slow || x.multi > y.multi) return false;
    const double dm = x.memory - y.memory;
    if (dm >= spec.memory_tolerance) return false;
    return strict || x.rounds < y.rounds || x.crypto < y.crypto || dm <= -spec.memory_tolerance ||
           x.slow < y.slow || x.multi < y.multi;
}

}  // namespace

std::vector<Instance> filter_mafia_bound(const std::vector<Instance>& instances, double log2_y) {
    std::vector<Instance> out;
    for (const auto& i : instances)
        if (i.attrs.log2_p_m <= log2_y) out.push_back(i);
    return out;
}

std::map<std::string, std::size_t> SolutionSet::totals() const {
    std::map<std::string, std::size_t> t;
    for (const auto& m : members) ++t[m.protocol];
    return t;
}

std::vector<std::string> SolutionSet::member_ids() const {
    std::vector<std::string> ids;
    ids.reserve(members.size());
    for (const auto& m : members) ids.push_back(m.id);
    return ids;
}

SolutionSet nondominated(const std::vector<Instance>& instances, const EngineOptions& options) {
    const std::size_t n = instances.size();
    std::vector<Row> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = flatten(instances[i].attrs);

    std::vector<std::size_t> by_rounds(n);
    std::iota(by_rounds.begin(), by_rounds.end(), 0);
    std::stable_sort(by_rounds.begin(), by_rounds.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].rounds < rows[b].rounds; });
    std::vector<Row> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = rows[by_rounds[i]];

    std::vector<char> dominated(n, 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        constexpr std::size_t kChunk = 64;
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + kChunk);
            for (std::size_t j = begin; j < end; ++j) {
                const Row& y = rows[j];
                for (std::size_t i = 0; i < n && sorted[i].rounds <= y.rounds; ++i) {
                    if (row_dominates(sorted[i], y, options.approx)) {
                        dominated[j] = 1;
                        break;
                    }
                }
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 256)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SolutionSet set;
    set.source = "engine";
    for (std::size_t i = 0; i < n; ++i)
        if (!dominated[i]) set.members.push_back(instances[i]);
    std::sort(set.members.begin(), set.members.end(), instance_less);
    return set;
}

std::string_view representative_rule_name(RepresentativeRule r) {
    return r == RepresentativeRule::LargestMafia ? "largest-mafia" : "fewest-bits";
}

std::optional<RepresentativeRule> parse_representative_rule(std::string_view s) {
    if (s == "largest-mafia") return RepresentativeRule::LargestMafia;
    if (s == "fewest-bits") return RepresentativeRule::FewestBits;
    return std::nullopt;
}

std::vector<Representative> representatives(const SolutionSet& set, RepresentativeRule rule) {
    auto better = [rule](const Instance& a, const Instance& b) {
        if (rule == RepresentativeRule::LargestMafia) {
            if (a.attrs.log2_p_m != b.attrs.log2_p_m) return a.attrs.log2_p_m > b.attrs.log2_p_m;
        } else if (a.attrs.memory_bits != b.attrs.memory_bits) {
            return a.attrs.memory_bits < b.attrs.memory_bits;
        }
        if (a.attrs.rounds != b.attrs.rounds) return a.attrs.rounds < b.attrs.rounds;
        return a.params < b.params;
    };
    std::map<std::string, Representative> best;
    for (const Instance& m : set.members) {
        auto [it, inserted] = best.try_emplace(m.protocol, Representative{m, 0});
        ++it->second.total;
        if (!inserted && better(m, it->second.instance)) it->second.instance = m;
    }
    std::vector<Representative> out;
    for (auto& [name, rep] : best) out.push_back(std::move(rep));
    return out;
}

}  // namespace dbeval
