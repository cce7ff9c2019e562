#include <doctest.h>

#include <algorithm>
#include <set>

#include "multiscan/aho_corasick.hpp"
#include "support.hpp"

using namespace multiscan;

namespace {

AcTrie make_trie(std::vector<std::string> patterns) {
    AcTrie trie = build_goto(PatternSet::from_patterns(std::move(patterns)));
    build_supply(trie);
    return trie;
}

/// Differential reference: the same scan over the linked trie instead of
/// the compiled tables.
std::uint64_t trie_search(const AcTrie& trie, std::string_view text,
                          std::size_t start, std::size_t stop) {
    std::uint32_t state = 0;
    std::uint64_t count = 0;
    for (std::size_t i = start; i < stop; ++i) {
        const auto c = static_cast<std::uint8_t>(text[i]);
        while (trie[state].next[c] == kAcFail) state = trie[state].supply;
        state = trie[state].next[c];
        count += trie[state].final_count;
    }
    return count;
}

std::uint32_t walk(const AcTrie& trie, std::string_view label) {
    std::uint32_t state = 0;
    for (const char c : label) {
        state = trie[state].next[static_cast<std::uint8_t>(c)];
        REQUIRE(state != kAcFail);
    }
    return state;
}

}  // namespace

TEST_CASE("goto construction for the AAC/AGT/GTA automaton") {
    const AcTrie trie = build_goto(PatternSet::from_patterns({"AAC", "AGT", "GTA"}));
    // Initial state plus the 8 distinct pattern prefixes, numbered in
    // insertion order.
    CHECK(trie.size() == 9);
    CHECK(walk(trie, "A") == 1);
    CHECK(walk(trie, "AA") == 2);
    CHECK(walk(trie, "AAC") == 3);
    CHECK(walk(trie, "AG") == 4);
    CHECK(walk(trie, "AGT") == 5);
    CHECK(walk(trie, "G") == 6);
    CHECK(walk(trie, "GT") == 7);
    CHECK(walk(trie, "GTA") == 8);
    for (const std::uint32_t terminal : {3u, 5u, 8u}) {
        CHECK(trie[terminal].final_count == 1);
    }
    CHECK(trie[1].final_count == 0);
}

TEST_CASE("goto construction edge cases") {
    CHECK(build_goto(PatternSet::from_patterns({"a"})).size() == 2);

    const AcTrie duplicated = build_goto(PatternSet::from_patterns({"ab", "ab"}));
    CHECK(duplicated.size() == 3);
    CHECK(duplicated[2].final_count == 2);
    CHECK(duplicated[2].pattern_ids == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("supply links of the AAC/AGT/GTA automaton") {
    const AcTrie trie = make_trie({"AAC", "AGT", "GTA"});
    // g(4, 'T') = 5, Supply(4) = 6 and g(6, 'T') = 7 force Supply(5) = 7.
    CHECK(trie[4].next[static_cast<std::uint8_t>('T')] == 5);
    CHECK(trie[4].supply == 6);
    CHECK(trie[6].next[static_cast<std::uint8_t>('T')] == 7);
    CHECK(trie[5].supply == 7);
}

TEST_CASE("depth-1 states fall back to the root") {
    const AcTrie trie = make_trie({"ab", "ba"});
    for (std::size_t s = 1; s < trie.size(); ++s) {
        if (trie[s].depth == 1) CHECK(trie[s].supply == 0);
    }
}

TEST_CASE("supply of a repeated character runs up the prefix chain") {
    const AcTrie trie = make_trie({"aa"});
    CHECK(walk(trie, "a") == 1);
    CHECK(walk(trie, "aa") == 2);
    CHECK(trie[2].supply == 1);
}

TEST_CASE("root row has no missing transitions after supply construction") {
    const AcTrie trie = make_trie({"acgt"});
    for (std::size_t c = 0; c < kAlphabetSize; ++c) {
        CHECK(trie[0].next[c] != kAcFail);
    }
}

TEST_CASE("compiled tables mirror the trie") {
    const AcTrie trie = make_trie({"AAC", "AGT", "GTA"});
    const AcAutomaton automaton = compile(trie);
    CHECK(automaton.num_states() == 9);
    CHECK(automaton.transition(4, 'T') == 5);
    CHECK(automaton.supply(4) == 6);
    CHECK(automaton.final_count(3) == 1);  // terminal for "AAC"
    CHECK(automaton.pattern_length() == 3);

    CHECK(compile(make_trie({"a"})).num_states() == 2);
}

TEST_CASE("search on the worked example and ranges") {
    const AcAutomaton automaton =
        build_automaton(PatternSet::from_patterns({"AAC", "AGT", "GTA"}));
    const std::string text = "AACAGTA";
    CHECK(ac_search(automaton, text, 0, text.size()) == 3);
    CHECK(ac_search(automaton, text, 2, 2) == 0);  // empty range

    const AcAutomaton single = build_automaton(PatternSet::from_patterns({"GTA"}));
    CHECK(ac_search(single, "GTAGT", 0, 5) == 1);

    CHECK_THROWS_AS(ac_search(automaton, text, 0, text.size() + 1),
                    std::out_of_range);
    CHECK_THROWS_AS(ac_search(automaton, text, 5, 2), std::out_of_range);
}

TEST_CASE("ranged search counts matches fully inside the range") {
    const AcAutomaton automaton = build_automaton(PatternSet::from_patterns({"aba"}));
    const std::string text = "ababa";  // matches at 0 and 2
    CHECK(ac_search(automaton, text, 0, 5) == 2);
    CHECK(ac_search(automaton, text, 0, 3) == 1);  // only the match ending at 2
    CHECK(ac_search(automaton, text, 1, 5) == 1);  // only the match starting at 2
    CHECK(ac_search(automaton, text, 1, 4) == 0);
}

TEST_CASE("position reporting matches the oracle enumeration") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const std::string text = testsupport::random_text(rng, 120, 2);
        const auto set = PatternSet::from_patterns(
            testsupport::random_patterns(rng, text, 4, 3, 2));
        auto found = ac_find(build_automaton(set), text, 0, text.size());
        std::sort(found.begin(), found.end());
        auto expected = testsupport::enumerate_matches(text, set);
        std::sort(expected.begin(), expected.end());
        CHECK(found == expected);
    }
}

TEST_CASE("state count bound and exactness without shared prefixes") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + rng() % 8;
        const std::size_t d = 1 + rng() % 16;
        std::vector<std::string> patterns;
        for (std::size_t i = 0; i < d; ++i) {
            patterns.push_back(testsupport::random_text(rng, m, 4));
        }
        const AcTrie trie = build_goto(PatternSet::from_patterns(patterns));
        CHECK(trie.size() <= m * d + 1);

        std::set<char> first_chars;
        bool disjoint_prefixes = true;
        for (const auto& p : patterns) {
            if (!first_chars.insert(p[0]).second) disjoint_prefixes = false;
        }
        if (disjoint_prefixes) CHECK(trie.size() == m * d + 1);
    }
}

TEST_CASE("supply chains reach the root without cycles") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const AcTrie trie = make_trie(
            testsupport::random_patterns(rng, testsupport::random_text(rng, 50, 2),
                                         5, 1 + rng() % 6, 2));
        for (std::size_t s = 1; s < trie.size(); ++s) {
            CHECK(trie[trie[s].supply].depth < trie[s].depth);
            std::uint32_t state = static_cast<std::uint32_t>(s);
            std::size_t steps = 0;
            while (state != 0) {
                state = trie[state].supply;
                ++steps;
                REQUIRE(steps < trie.size());
            }
        }
    }
}

TEST_CASE("oracle equivalence with differential trie/table checks") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t alphabet = (trial % 3 == 0) ? 2 : (trial % 3 == 1 ? 4 : 256);
        const std::size_t n = rng() % 500;
        const std::size_t m = 1 + rng() % 16;
        const std::size_t d = 1 + rng() % 16;
        const std::string text = alphabet == 256
                                     ? testsupport::random_bytes(rng, n)
                                     : testsupport::random_text(rng, n, alphabet);
        const auto set = PatternSet::from_patterns(
            testsupport::random_patterns(rng, text, d, m, alphabet));

        AcTrie trie = build_goto(set);
        build_supply(trie);
        const AcAutomaton linked = compile(trie, AcCompileMode::supply_links);
        const AcAutomaton dense = compile(trie, AcCompileMode::precomputed);

        const MatchCount expected = naive_count(text, set);
        CHECK(ac_search(linked, text, 0, text.size()) == expected);
        CHECK(ac_search(dense, text, 0, text.size()) == expected);
        CHECK(trie_search(trie, text, 0, text.size()) == expected);
    }
}

TEST_CASE("supply-walk effort stays linear in the scanned range") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 50 + rng() % 400;
        const std::size_t m = 2 + rng() % 10;
        const std::string text = testsupport::random_text(rng, n, 2);
        const auto set = PatternSet::from_patterns(
            testsupport::random_patterns(rng, text, 8, m, 2));
        const AcAutomaton automaton = build_automaton(set);
        AcSearchStats stats;
        ac_search(automaton, text, 0, text.size(), &stats);
        CHECK(stats.supply_steps <= 2 * text.size() + m);
    }
}

TEST_CASE("precomputed mode leaves no missing transitions") {
    const AcAutomaton automaton = build_automaton(
        PatternSet::from_patterns({"AAC", "AGT", "GTA"}), AcCompileMode::precomputed);
    for (std::uint32_t s = 0; s < automaton.num_states(); ++s) {
        for (std::size_t c = 0; c < kAlphabetSize; ++c) {
            const std::uint32_t next =
                automaton.transition(s, static_cast<std::uint8_t>(c));
            CHECK(next != kAcFail);
            CHECK(next < automaton.num_states());
        }
    }
    AcSearchStats stats;
    ac_search(automaton, "AACAGTAGTA", 0, 10, &stats);
    CHECK(stats.supply_steps == 0);
}
