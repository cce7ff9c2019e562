#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Shared domain types and the brute-force counting oracle.
//
// Input text is a raw byte sequence (values 0-255, no case folding, no
// alphabet validation); APIs take std::string_view. A match is a
// (start position, pattern index) pair, so a pattern that appears twice
// in the set contributes twice at every position where it occurs.

namespace multiscan {

/// Total number of (position, pattern index) match pairs.
using MatchCount = std::uint64_t;

/// Tables are sized for every byte value, not just the characters a
/// particular corpus happens to use.
inline constexpr std::size_t kAlphabetSize = 256;

enum class Algorithm { aho_corasick, wu_manber };

const char* algorithm_name(Algorithm algo);

/// Parses "ac" / "wm"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);

/// One reported occurrence (debug/position mode only; counting paths
/// never materialize these).
struct Match {
    std::uint64_t position = 0;  // start index in the text
    std::uint32_t pattern = 0;   // index into the pattern set

    friend bool operator==(const Match&, const Match&) = default;
    friend auto operator<=>(const Match&, const Match&) = default;
};

/// An ordered set of d patterns of uniform length m over raw bytes.
/// Duplicate pattern strings are allowed and keep their own indices.
class PatternSet {
  public:
    /// Validates the invariants (d >= 1, m >= 1, all lengths equal);
    /// throws std::invalid_argument on violation.
    static PatternSet from_patterns(std::vector<std::string> patterns);

    std::size_t size() const { return patterns_.size(); }     // d
    std::size_t length() const { return length_; }            // m
    const std::string& operator[](std::size_t i) const { return patterns_[i]; }
    const std::vector<std::string>& patterns() const { return patterns_; }

  private:
    PatternSet(std::vector<std::string> patterns, std::size_t length)
        : patterns_(std::move(patterns)), length_(length) {}

    std::vector<std::string> patterns_;
    std::size_t length_;
};

/// O(n * d * m) oracle: direct character comparison of every pattern at
/// every alignment. Returns 0 when the text is shorter than m.
MatchCount naive_count(std::string_view text, const PatternSet& patterns);

}  // namespace multiscan
