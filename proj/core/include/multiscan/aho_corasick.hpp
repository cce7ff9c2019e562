#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "multiscan/core.hpp"

// Aho-Corasick automaton: linked trie construction (goto + supply +
// per-state pattern-end counts), compilation to dense tables, and the
// linear scan that resolves missing transitions through supply links.

namespace multiscan {

/// Sentinel for a missing transition; distinct from every valid state id.
inline constexpr std::uint32_t kAcFail = 0xFFFFFFFFu;

struct TrieState {
    std::array<std::uint32_t, kAlphabetSize> next;  // kAcFail when absent
    std::uint32_t supply = 0;
    std::uint32_t final_count = 0;  // pattern indices ending exactly here
    std::uint32_t depth = 0;
    std::vector<std::uint32_t> pattern_ids;  // the indices behind final_count

    TrieState() { next.fill(kAcFail); }
};

/// State 0 is the initial state; ids follow insertion order (per pattern,
/// depth first), so shared prefixes share states.
using AcTrie = std::vector<TrieState>;

/// Builds the goto trie for the pattern set. Terminal states accumulate
/// one final_count per pattern index (duplicates count separately).
AcTrie build_goto(const PatternSet& patterns);

/// Completes the supply links in breadth-first order and turns the root's
/// absent transitions into self-loops. Call exactly once, after build_goto.
void build_supply(AcTrie& trie);

enum class AcCompileMode {
    /// Dense rows keep kAcFail for absent transitions; the scan walks
    /// supply links at run time.
    supply_links,
    /// Every row entry resolved through the supply chain up front; the
    /// scan never sees kAcFail.
    precomputed,
};

/// Dense-table form of the trie: a [num_states x 256] transition table
/// plus per-state supply and pattern-end-count vectors. Immutable and
/// safe to share across threads.
class AcAutomaton {
  public:
    std::uint32_t num_states() const { return num_states_; }
    AcCompileMode mode() const { return mode_; }
    std::uint32_t pattern_length() const { return pattern_length_; }

    std::uint32_t transition(std::uint32_t state, std::uint8_t byte) const {
        return transitions_[static_cast<std::size_t>(state) * kAlphabetSize + byte];
    }
    std::uint32_t supply(std::uint32_t state) const { return supply_[state]; }
    std::uint32_t final_count(std::uint32_t state) const { return final_[state]; }

    /// Pattern indices whose full string ends at this state.
    std::span<const std::uint32_t> patterns_at(std::uint32_t state) const {
        return {pattern_ids_.data() + pattern_offsets_[state],
                pattern_ids_.data() + pattern_offsets_[state + 1]};
    }

  private:
    friend AcAutomaton compile(const AcTrie& trie, AcCompileMode mode);
    friend MatchCount ac_search(const AcAutomaton&, std::string_view, std::size_t,
                                std::size_t, struct AcSearchStats*);
    friend std::vector<Match> ac_find(const AcAutomaton&, std::string_view,
                                      std::size_t, std::size_t);

    std::vector<std::uint32_t> transitions_;      // num_states x 256
    std::vector<std::uint32_t> supply_;           // num_states
    std::vector<std::uint32_t> final_;            // num_states
    std::vector<std::uint32_t> pattern_offsets_;  // num_states + 1 (CSR)
    std::vector<std::uint32_t> pattern_ids_;      // d entries total
    std::uint32_t num_states_ = 0;
    std::uint32_t pattern_length_ = 0;  // uniform m (depth of terminal states)
    AcCompileMode mode_ = AcCompileMode::supply_links;
};

/// Flattens a supply-completed trie into dense tables with identical
/// search behavior.
AcAutomaton compile(const AcTrie& trie, AcCompileMode mode = AcCompileMode::supply_links);

AcAutomaton build_automaton(const PatternSet& patterns,
                            AcCompileMode mode = AcCompileMode::supply_links);

struct AcSearchStats {
    std::uint64_t supply_steps = 0;
};

/// Scans text positions [start, stop) from a cold state 0 and returns the
/// number of matches whose end index lies in the range (all characters of
/// a counted match lie inside the range). Throws std::out_of_range for an
/// invalid range.
MatchCount ac_search(const AcAutomaton& automaton, std::string_view text,
                     std::size_t start, std::size_t stop,
                     AcSearchStats* stats = nullptr);

/// Position-reporting variant for debug output: (start, pattern) pairs of
/// every match found by the scan above, in scan order.
std::vector<Match> ac_find(const AcAutomaton& automaton, std::string_view text,
                           std::size_t start, std::size_t stop);

}  // namespace multiscan
