#include "dbeval/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace dbeval {

SolutionSet naive_nondominated(const std::vector<Instance>& instances, const ApproxSpec& approx, std::size_t cap) {
    if (instances.size() > cap) {
        std::ostringstream msg;
        msg << "naive oracle refuses " << instances.size() << " instances (cap " << cap
            << "); use the engine or sample a subset of at most " << cap << " instances";
        throw OracleRefused(msg.str());
    }
    SolutionSet set;
    set.source = "naive-oracle";
    for (const Instance& y : instances) {
        bool beaten = false;
        for (const Instance& x : instances) {
            if (dominates(x.attrs, y.attrs, approx)) {
                beaten = true;
                break;
            }
        }
        if (!beaten) set.members.push_back(y);
    }
    std::sort(set.members.begin(), set.members.end(), instance_less);
    return set;
}

bool McEstimate::within(double expected, double k) const {
    const double diff = std::fabs(mean - expected);
    return diff == 0.0 || diff <= k * stderr_;
}

namespace {

constexpr unsigned kStreams = 64;
constexpr const char* kRngName = "std::mt19937_64";

// One trial: returns true when the adversary passes every round.
using Trial = std::function<bool(std::mt19937_64&)>;

McEstimate run_trials(unsigned n, const McOptions& options, const Trial& trial) {
    McEstimate est;
    est.trials = options.trials;
    est.seed = options.seed;
    est.rng = kRngName;
    if (n == 0 || options.trials == 0) {
        est.successes = options.trials;
        est.mean = 1.0;
        return est;
    }
    // Fixed streams keep the estimate independent of the thread count.
    std::vector<std::uint64_t> counts(kStreams, 0);
    std::seed_seq master{options.seed, std::uint64_t{n}};
    std::vector<std::uint32_t> seeds(2 * kStreams);
    master.generate(seeds.begin(), seeds.end());
    auto work = [&](unsigned stream) {
        std::mt19937_64 rng((std::uint64_t{seeds[2 * stream]} << 32) | seeds[2 * stream + 1]);
        const std::uint64_t share = options.trials / kStreams + (stream < options.trials % kStreams ? 1 : 0);
        std::uint64_t ok = 0;
        for (std::uint64_t i = 0; i < share; ++i) ok += trial(rng) ? 1 : 0;
        counts[stream] = ok;
    };
    const unsigned threads = std::clamp(options.threads ? options.threads : std::thread::hardware_concurrency(),
                                        1u, kStreams);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (unsigned s = t; s < kStreams; s += threads) work(s);
        });
    for (auto& th : pool) th.join();
    for (auto c : counts) est.successes += c;
    est.mean = static_cast<double>(est.successes) / static_cast<double>(est.trials);
    est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(est.trials));
    return est;
}

bool coin(std::mt19937_64& rng) { return (rng() >> 63) != 0; }

}  // namespace

McEstimate simulate_random_answer(unsigned n, const McOptions& options) {
    return run_trials(n, options, [n](std::mt19937_64& rng) {
        for (unsigned i = 0; i < n; ++i) {
            const bool expected = coin(rng);
            if (coin(rng) != expected) return false;
        }
        return true;
    });
}

McEstimate simulate_hk_mafia(unsigned n, const McOptions& options) {
    return run_trials(n, options, [n](std::mt19937_64& rng) {
        for (unsigned i = 0; i < n; ++i) {
            const bool v[2] = {coin(rng), coin(rng)};
            const bool guessed_challenge = coin(rng);
            const bool relayed = v[guessed_challenge];  // prover's answer to the pre-ask
            const bool challenge = coin(rng);
            const bool answer = challenge == guessed_challenge ? relayed : coin(rng);
            if (answer != v[challenge]) return false;
        }
        return true;
    });
}

McEstimate simulate_hk_distance(unsigned n, const McOptions& options, bool force_equal_registers) {
    return run_trials(n, options, [n, force_equal_registers](std::mt19937_64& rng) {
        for (unsigned i = 0; i < n; ++i) {
            const bool v0 = coin(rng);
            const bool v1 = force_equal_registers ? v0 : coin(rng);
            const bool early = v0 == v1 ? v0 : coin(rng);
            const bool challenge = coin(rng);
            if (early != (challenge ? v1 : v0)) return false;
        }
        return true;
    });
}

namespace {

std::string describe(const McEstimate& e, double expected) {
    std::ostringstream s;
    s.precision(6);
    s << "mean " << e.mean << " expected " << expected << " stderr " << e.stderr_ << " trials " << e.trials
      << " rng " << e.rng << " seed " << e.seed;
    return s.str();
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(const Catalog& catalog, const VerifyOptions& options) {
    std::vector<OracleCheck> checks;
    for (unsigned n = 1; n <= options.max_rounds; ++n) {
        const double half = std::pow(0.5, n);
        const double three_quarters = std::pow(0.75, n);
        const McEstimate ra = simulate_random_answer(n, options.mc);
        checks.push_back({"random-answer n=" + std::to_string(n), ra.within(half), describe(ra, half)});
        const McEstimate hm = simulate_hk_mafia(n, options.mc);
        checks.push_back({"hk-mafia n=" + std::to_string(n), hm.within(three_quarters), describe(hm, three_quarters)});
        const McEstimate hd = simulate_hk_distance(n, options.mc);
        checks.push_back(
            {"hk-distance n=" + std::to_string(n), hd.within(three_quarters), describe(hd, three_quarters)});
    }

    const std::vector<Instance> all = catalog.generate();
    std::mt19937_64 rng(options.mc.seed);
    const std::size_t k = std::min(options.subset_size, all.size());
    for (unsigned s = 0; s < options.subset_count; ++s) {
        std::vector<Instance> subset;
        subset.reserve(k);
        std::sample(all.begin(), all.end(), std::back_inserter(subset), k, rng);
        const SolutionSet naive = naive_nondominated(subset, options.approx);
        const SolutionSet engine = nondominated(subset, EngineOptions{options.approx, 1});
        const bool same = naive.member_ids() == engine.member_ids();
        checks.push_back({"naive-vs-engine subset " + std::to_string(s + 1), same,
                          std::to_string(naive.members.size()) + " naive / " +
                              std::to_string(engine.members.size()) + " engine members of " +
                              std::to_string(subset.size())});
    }
    return checks;
}

}  // namespace dbeval
