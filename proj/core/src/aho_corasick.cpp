#include "multiscan/aho_corasick.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace multiscan {

AcTrie build_goto(const PatternSet& patterns) {
    AcTrie trie;
    trie.reserve(patterns.size() * patterns.length() + 1);
    trie.emplace_back();  // initial state q0

    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const std::string& pattern = patterns[i];
        std::uint32_t state = 0;
        std::size_t j = 0;
        // Follow the existing path as far as it goes.
        while (j < pattern.size()) {
            const std::uint32_t next =
                trie[state].next[static_cast<std::uint8_t>(pattern[j])];
            if (next == kAcFail) break;
            state = next;
            ++j;
        }
        // Extend with fresh states for the remaining characters.
        for (; j < pattern.size(); ++j) {
            const auto fresh = static_cast<std::uint32_t>(trie.size());
            trie.emplace_back();
            trie.back().depth = trie[state].depth + 1;
            trie[state].next[static_cast<std::uint8_t>(pattern[j])] = fresh;
            state = fresh;
        }
        trie[state].final_count += 1;
        trie[state].pattern_ids.push_back(static_cast<std::uint32_t>(i));
    }
    return trie;
}

void build_supply(AcTrie& trie) {
    std::queue<std::uint32_t> pending;

    // Depth-1 states fall back to the root; the root's absent transitions
    // become self-loops so the search loop can always leave state 0.
    for (std::size_t c = 0; c < kAlphabetSize; ++c) {
        const std::uint32_t child = trie[0].next[c];
        if (child == kAcFail) {
            trie[0].next[c] = 0;
        } else {
            trie[child].supply = 0;
            pending.push(child);
        }
    }

    while (!pending.empty()) {
        const std::uint32_t current = pending.front();
        pending.pop();
        for (std::size_t c = 0; c < kAlphabetSize; ++c) {
            const std::uint32_t child = trie[current].next[c];
            if (child == kAcFail) continue;
            pending.push(child);
            // Walk the supply chain until a state with an outgoing
            // transition on c turns up; row 0 has none missing, so the
            // walk always terminates.
            std::uint32_t state = trie[current].supply;
            while (trie[state].next[c] == kAcFail) {
                state = trie[state].supply;
            }
            trie[child].supply = trie[state].next[c];
        }
    }
}

AcAutomaton compile(const AcTrie& trie, AcCompileMode mode) {
    AcAutomaton automaton;
    const auto num_states = static_cast<std::uint32_t>(trie.size());
    automaton.num_states_ = num_states;
    automaton.mode_ = mode;
    automaton.transitions_.resize(static_cast<std::size_t>(num_states) * kAlphabetSize);
    automaton.supply_.resize(num_states);
    automaton.final_.resize(num_states);
    automaton.pattern_offsets_.resize(num_states + 1, 0);

    for (std::uint32_t s = 0; s < num_states; ++s) {
        std::copy(trie[s].next.begin(), trie[s].next.end(),
                  automaton.transitions_.begin() +
                      static_cast<std::size_t>(s) * kAlphabetSize);
        automaton.supply_[s] = trie[s].supply;
        automaton.final_[s] = trie[s].final_count;
        automaton.pattern_offsets_[s + 1] =
            automaton.pattern_offsets_[s] +
            static_cast<std::uint32_t>(trie[s].pattern_ids.size());
    }
    automaton.pattern_ids_.reserve(automaton.pattern_offsets_[num_states]);
    for (std::uint32_t s = 0; s < num_states; ++s) {
        automaton.pattern_ids_.insert(automaton.pattern_ids_.end(),
                                      trie[s].pattern_ids.begin(),
                                      trie[s].pattern_ids.end());
        if (trie[s].final_count > 0) automaton.pattern_length_ = trie[s].depth;
    }

    if (mode == AcCompileMode::precomputed) {
        // Resolve missing entries through the supply chain. Supply states
        // have strictly smaller depth, so rows are complete by the time
        // deeper states copy from them.
        std::vector<std::uint32_t> order(num_states);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) {
                             return trie[a].depth < trie[b].depth;
                         });
        for (const std::uint32_t s : order) {
            auto* row = automaton.transitions_.data() +
                        static_cast<std::size_t>(s) * kAlphabetSize;
            const auto* supply_row =
                automaton.transitions_.data() +
                static_cast<std::size_t>(automaton.supply_[s]) * kAlphabetSize;
            for (std::size_t c = 0; c < kAlphabetSize; ++c) {
                if (row[c] == kAcFail) row[c] = supply_row[c];
            }
        }
    }
    return automaton;
}

AcAutomaton build_automaton(const PatternSet& patterns, AcCompileMode mode) {
    AcTrie trie = build_goto(patterns);
    build_supply(trie);
    return compile(trie, mode);
}

namespace {

void check_range(std::string_view text, std::size_t start, std::size_t stop) {
    if (start > stop || stop > text.size()) {
        throw std::out_of_range("scan range outside the text");
    }
}

}  // namespace

MatchCount ac_search(const AcAutomaton& automaton, std::string_view text,
                     std::size_t start, std::size_t stop, AcSearchStats* stats) {
    check_range(text, start, stop);
    const std::uint32_t* transitions = automaton.transitions_.data();
    const std::uint32_t* supply = automaton.supply_.data();
    const std::uint32_t* final_count = automaton.final_.data();

    std::uint32_t state = 0;
    MatchCount count = 0;
    std::uint64_t supply_steps = 0;
    for (std::size_t i = start; i < stop; ++i) {
        const auto byte = static_cast<std::uint8_t>(text[i]);
        std::uint32_t next;
        while ((next = transitions[static_cast<std::size_t>(state) * kAlphabetSize +
                                   byte]) == kAcFail) {
            state = supply[state];
            ++supply_steps;
        }
        state = next;
        count += final_count[state];
    }
    if (stats != nullptr) stats->supply_steps = supply_steps;
    return count;
}

std::vector<Match> ac_find(const AcAutomaton& automaton, std::string_view text,
                           std::size_t start, std::size_t stop) {
    check_range(text, start, stop);
    const std::size_t m = automaton.pattern_length();
    std::vector<Match> matches;
    std::uint32_t state = 0;
    for (std::size_t i = start; i < stop; ++i) {
        const auto byte = static_cast<std::uint8_t>(text[i]);
        std::uint32_t next;
        while ((next = automaton.transition(state, byte)) == kAcFail) {
            state = automaton.supply(state);
        }
        state = next;
        for (const std::uint32_t pattern : automaton.patterns_at(state)) {
            matches.push_back(Match{i + 1 - m, pattern});  // start = i - m + 1
        }
    }
    return matches;
}

}  // namespace multiscan
