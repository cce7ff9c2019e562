#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "multiscan/core.hpp"

// Dataset preparation: sequence files in, one-dimensional byte strings
// and generated pattern sets out.

namespace multiscan {

/// Reads a plain or FASTA-like sequence file into one flat string: lines
/// starting with '>' or ';' are dropped, line breaks are stripped, all
/// other bytes pass through unchanged. `limit` truncates the result.
/// Throws std::runtime_error if the file cannot be read; an empty result
/// is not an error.
std::string load_text(const std::filesystem::path& file,
                      std::optional<std::uint64_t> limit = std::nullopt);

/// Samples `count` start positions uniformly (with replacement, seeded)
/// and extracts subsequences of the given length. Every generated pattern
/// is a substring of the text, so the set is guaranteed at least
/// min(count, n / length) matches. Throws std::invalid_argument when the
/// text is shorter than `length`.
PatternSet generate_patterns(std::string_view text, std::size_t count,
                             std::size_t length, std::uint64_t seed);

/// Pattern files: one pattern per line, raw bytes, trailing newline
/// optional.
PatternSet load_patterns(const std::filesystem::path& file);
void save_patterns(const PatternSet& patterns, const std::filesystem::path& file);

}  // namespace multiscan
