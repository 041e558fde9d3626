#include <doctest.h>

#include <cmath>

#include "dbeval/catalog.hpp"
#include "dbeval/oracles.hpp"

using namespace dbeval;

namespace {

McOptions small(std::uint64_t seed = 1, unsigned threads = 1) { return McOptions{200'000, seed, threads}; }

}  // namespace

TEST_CASE("zero rounds always succeed") {
    for (auto est : {simulate_random_answer(0, small()), simulate_hk_mafia(0, small()), simulate_hk_distance(0, small())}) {
        CHECK(est.mean == 1.0);
        CHECK(est.stderr_ == 0.0);
        CHECK(est.within(1.0));
    }
}

TEST_CASE("estimates record their provenance") {
    const auto est = simulate_hk_mafia(3, small(42));
    CHECK(est.trials == 200'000);
    CHECK(est.seed == 42);
    CHECK(est.rng == "std::mt19937_64");
    CHECK(est.stderr_ == doctest::Approx(std::sqrt(est.mean * (1 - est.mean) / est.trials)));
}

TEST_CASE("estimates are independent of the thread count") {
    const auto a = simulate_hk_distance(4, small(9, 1));
    const auto b = simulate_hk_distance(4, small(9, 5));
    CHECK(a.successes == b.successes);
    const auto c = simulate_hk_distance(4, small(10, 1));
    CHECK(a.successes != c.successes);
}

TEST_CASE("simulators agree with their closed forms") {
    for (unsigned n : {1u, 3u, 6u}) {
        CAPTURE(n);
        CHECK(simulate_random_answer(n, small(n)).within(std::pow(0.5, n)));
        CHECK(simulate_hk_mafia(n, small(n)).within(std::pow(0.75, n)));
        CHECK(simulate_hk_distance(n, small(n)).within(std::pow(0.75, n)));
    }
}

TEST_CASE("equal registers let a distance fraudster always win") {
    const auto est = simulate_hk_distance(8, small(), true);
    CHECK(est.mean == 1.0);
}

TEST_CASE("within uses the standard error") {
    McEstimate e;
    e.mean = 0.5;
    e.stderr_ = 0.01;
    CHECK(e.within(0.529));
    CHECK(e.within(0.471));
    CHECK_FALSE(e.within(0.531));
    CHECK(e.within(0.519, 2.0));
    CHECK_FALSE(e.within(0.521, 2.0));
}

TEST_CASE("the naive oracle refuses oversized inputs with guidance") {
    const auto all = Catalog::builtin().generate();
    try {
        naive_nondominated(all);
        FAIL("expected refusal");
    } catch (const OracleRefused& e) {
        const std::string msg = e.what();
        CHECK(msg.find("5000") != std::string::npos);
        CHECK(msg.find("engine") != std::string::npos);
    }
    std::vector<Instance> few(all.begin(), all.begin() + 10);
    CHECK(naive_nondominated(few, {}, 10).source == "naive-oracle");
    CHECK_THROWS_AS(naive_nondominated(few, {}, 9), OracleRefused);
}

TEST_CASE("the oracle suite passes on a reduced budget") {
    VerifyOptions vo;
    vo.mc = small(McOptions{}.seed);
    vo.max_rounds = 4;
    vo.subset_count = 3;
    const auto checks = run_oracle_suite(Catalog::builtin(), vo);
    CHECK(checks.size() == 4 * 3 + 3);
    for (const auto& c : checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
    }
}
