#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "multiscan/engine.hpp"
#include "support.hpp"

using namespace multiscan;

TEST_CASE("single worker equals the sequential count") {
    const auto set = PatternSet::from_patterns({"AAC", "AGT", "GTA"});
    const std::string text = "AACAGTA";
    for (const Algorithm algo : {Algorithm::aho_corasick, Algorithm::wu_manber}) {
        const auto matcher = make_matcher(algo, set);
        const ParallelResult result = parallel_count(*matcher, text, 1);
        CHECK(result.total == 3);
        CHECK(result.per_worker == CountVector{3});
    }
}

TEST_CASE("totals are identical across worker counts and equal the oracle") {
    std::mt19937_64 rng(31);
    const std::string text = testsupport::random_text(rng, 5000, 4);
    const auto set = PatternSet::from_patterns(
        testsupport::random_patterns(rng, text, 16, 5, 4));
    const MatchCount expected = naive_count(text, set);

    for (const Algorithm algo : {Algorithm::aho_corasick, Algorithm::wu_manber}) {
        const auto matcher = make_matcher(algo, set);
        for (const std::uint32_t w : {1u, 2u, 3u, 4u, 7u, 8u, 16u}) {
            const ParallelResult result = parallel_count(*matcher, text, w);
            CHECK(result.total == expected);
            CHECK(result.per_worker.size() == w);
            CHECK(reduce(result.per_worker) == result.total);
        }
    }
}

TEST_CASE("a worker's chunk attribution is independent of the split") {
    const auto set = PatternSet::from_patterns({"AAC", "AGT", "GTA"});
    const auto matcher = make_ac_matcher(set);
    const ParallelResult result = parallel_count(*matcher, "AACAGTA", 3);
    CHECK(result.total == 3);
}

TEST_CASE("counts are deterministic across runs and engine instances") {
    std::mt19937_64 rng(32);
    const std::string text = testsupport::random_text(rng, 3000, 2);
    const auto set = PatternSet::from_patterns(
        testsupport::random_patterns(rng, text, 8, 4, 2));
    const auto matcher = make_ac_matcher(set);

    Engine engine(5);
    const CountVector first = engine.scan(*matcher, text);
    const CountVector second = engine.scan(*matcher, text);
    CHECK(first == second);
    CHECK(parallel_count(*matcher, text, 5).per_worker == first);
}

TEST_CASE("tiled runs reproduce untiled totals") {
    std::mt19937_64 rng(33);
    const std::string text = testsupport::random_text(rng, 4000, 4);
    const auto set = PatternSet::from_patterns(
        testsupport::random_patterns(rng, text, 8, 8, 4));
    for (const Algorithm algo : {Algorithm::aho_corasick, Algorithm::wu_manber}) {
        const auto matcher = make_matcher(algo, set);
        const MatchCount untiled = parallel_count(*matcher, text, 4).total;
        for (const std::uint64_t tile : {8ull, 100ull, 16128ull}) {
            CHECK(parallel_count(*matcher, text, 4, TileConfig{tile}).total ==
                  untiled);
        }
    }
}

TEST_CASE("scanned characters account for the overlap surplus") {
    const PartitionPlan plan = make_plan(4000, 8, 4);
    CHECK(plan.scanned_characters() == 4000 + 7 * 3);
}

TEST_CASE("empty text still runs every phase") {
    const auto set = PatternSet::from_patterns({"abc"});
    const TimingReport report =
        timed_run(Algorithm::aho_corasick, set, "", 2, 3);
    CHECK(report.total == 0);
    CHECK(report.samples.size() == 3);
}

TEST_CASE("timed runs carry per-phase medians over the repeats") {
    std::mt19937_64 rng(34);
    const std::string text = testsupport::random_text(rng, 2000, 4);
    const auto set = PatternSet::from_patterns(
        testsupport::random_patterns(rng, text, 4, 4, 4));
    const TimingReport report = timed_run(Algorithm::wu_manber, set, text, 2, 3);
    CHECK(report.samples.size() == 3);
    CHECK(report.total == naive_count(text, set));
    CHECK(report.per_worker.size() == 2);

    std::vector<double> searches;
    for (const auto& sample : report.samples) {
        CHECK(sample.preprocess_seconds >= 0);
        CHECK(sample.search_seconds >= 0);
        CHECK(sample.reduce_seconds >= 0);
        searches.push_back(sample.search_seconds);
    }
    std::sort(searches.begin(), searches.end());
    CHECK(report.median.search_seconds == searches[1]);

    CHECK_THROWS_AS(timed_run(Algorithm::aho_corasick, set, text, 2, 0),
                    std::invalid_argument);
}

TEST_CASE("worker failures surface with the worker identified") {
    // A matcher whose pattern length exceeds the tile size it is run with
    // makes every worker throw inside the pool.
    const auto set = PatternSet::from_patterns({"abcdefgh"});
    const auto matcher = make_ac_matcher(set);
    Engine engine(2);
    CHECK_THROWS_WITH_AS(engine.scan(*matcher, "abcdefghabcdefgh", TileConfig{4}),
                         doctest::Contains("worker"), std::runtime_error);
}

TEST_CASE("engine rejects zero workers") {
    CHECK_THROWS_AS(Engine(0), std::invalid_argument);
}
