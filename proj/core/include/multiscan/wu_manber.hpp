#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "multiscan/core.hpp"

// Wu-Manber multiple-pattern search: SHIFT/HASH/PREFIX preprocessing with
// shift-and-add block hashing, then a backward-shift scan that verifies
// suffix-filter hits through a prefix filter and direct comparison.

namespace multiscan {

struct WmParams {
    std::uint32_t suffix_block = 3;  // characters hashed by the suffix filter
    std::uint32_t prefix_block = 2;  // characters hashed by the prefix filter
    std::uint32_t bitshift = 2;      // left shift per character in the hash fold
};

/// Shift-and-add hash: h starts at 0 and folds each character as
/// h = (h << bitshift) + byte.
std::uint32_t hash_block(std::string_view block, std::uint32_t bitshift);

/// Number of distinct hash values a block of `block_len` bytes can take:
/// sum over i in [0, block_len) of 256 * (2^bitshift)^i.
std::size_t hash_table_size(std::uint32_t block_len, std::uint32_t bitshift);

/// Preprocessing output. shift[h] is the largest safe window advance for a
/// suffix block hashing to h (0 means some pattern's suffix lands there and
/// the bucket must be consulted); prefix[i] is the hash of pattern i's
/// leading prefix_block characters. Immutable and shareable after build.
class WmTables {
  public:
    const WmParams& params() const { return params_; }
    std::size_t pattern_length() const { return pattern_length_; }
    std::size_t pattern_count() const { return pattern_count_; }

    std::size_t shift_size() const { return shift_.size(); }
    std::uint32_t shift_at(std::uint32_t hash) const { return shift_[hash]; }

    /// Pattern indices whose suffix block hashes to `hash`, ascending.
    std::span<const std::uint32_t> bucket(std::uint32_t hash) const {
        return {bucket_patterns_.data() + bucket_offsets_[hash],
                bucket_patterns_.data() + bucket_offsets_[hash + 1]};
    }

    std::uint32_t prefix_at(std::size_t pattern) const { return prefix_[pattern]; }

    /// Pattern blocks visited while building the tables; the build walks
    /// exactly (m - suffix_block + 1) blocks per pattern.
    std::uint64_t block_visits() const { return block_visits_; }

  private:
    friend WmTables wm_preprocess(const PatternSet&, const WmParams&);
    friend MatchCount wm_search(const WmTables&, const PatternSet&,
                                std::string_view, std::size_t, std::size_t);
    friend std::vector<Match> wm_find(const WmTables&, const PatternSet&,
                                      std::string_view, std::size_t, std::size_t);

    std::vector<std::uint32_t> shift_;
    std::vector<std::uint32_t> bucket_offsets_;   // shift_size() + 1 (CSR)
    std::vector<std::uint32_t> bucket_patterns_;  // d entries, ascending per bucket
    std::vector<std::uint32_t> bucket_prefixes_;  // prefix_[r] copied next to each entry
    std::vector<std::uint32_t> prefix_;           // d entries
    WmParams params_;
    std::size_t pattern_length_ = 0;
    std::size_t pattern_count_ = 0;
    std::uint64_t block_visits_ = 0;
};

/// Builds SHIFT/HASH/PREFIX for the pattern set. Throws
/// std::invalid_argument unless m >= suffix_block >= prefix_block >= 1.
WmTables wm_preprocess(const PatternSet& patterns, const WmParams& params = {});

/// Counts occurrences whose start position lies in [base, base_end) (and
/// whose end fits inside the text). The scan reads up to m - 1 characters
/// past base_end, clamped at the text end, so per-chunk counts over a
/// partition sum to the whole-text count. Throws std::out_of_range for an
/// invalid range and std::invalid_argument if the tables do not match the
/// pattern set.
MatchCount wm_search(const WmTables& tables, const PatternSet& patterns,
                     std::string_view text, std::size_t base, std::size_t base_end);

/// Position-reporting variant of wm_search (debug output).
std::vector<Match> wm_find(const WmTables& tables, const PatternSet& patterns,
                           std::string_view text, std::size_t base,
                           std::size_t base_end);

}  // namespace multiscan
