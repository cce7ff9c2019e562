#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "multiscan/core.hpp"

// Shared helpers for randomized tests. Everything is seeded so failures
// reproduce.

namespace testsupport {

inline std::string random_text(std::mt19937_64& rng, std::size_t length,
                               std::size_t alphabet) {
    std::string text(length, '\0');
    for (char& c : text) {
        c = static_cast<char>('a' + rng() % alphabet);
    }
    return text;
}

/// Full-byte-range variant (alphabet = 256).
inline std::string random_bytes(std::mt19937_64& rng, std::size_t length) {
    std::string text(length, '\0');
    for (char& c : text) {
        c = static_cast<char>(rng() % 256);
    }
    return text;
}

/// Patterns drawn half from the text (guaranteed hits), half random.
inline std::vector<std::string> random_patterns(std::mt19937_64& rng,
                                                const std::string& text,
                                                std::size_t count, std::size_t m,
                                                std::size_t alphabet) {
    std::vector<std::string> patterns;
    patterns.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0 && text.size() >= m) {
            const std::size_t pos = rng() % (text.size() - m + 1);
            patterns.push_back(text.substr(pos, m));
        } else if (alphabet == 256) {
            patterns.push_back(random_bytes(rng, m));
        } else {
            patterns.push_back(random_text(rng, m, alphabet));
        }
    }
    return patterns;
}

inline std::string synthetic_dna(std::uint64_t length, std::uint64_t seed) {
    static constexpr char kBases[] = {'a', 'c', 'g', 't'};
    std::mt19937_64 rng(seed);
    std::string text(length, '\0');
    for (char& c : text) {
        c = kBases[rng() % 4];
    }
    return text;
}

/// Test-side oracle for positions: every (start, pattern) pair by direct
/// comparison, in position-major order.
inline std::vector<multiscan::Match> enumerate_matches(
    std::string_view text, const multiscan::PatternSet& patterns) {
    std::vector<multiscan::Match> matches;
    const std::size_t m = patterns.length();
    if (text.size() < m) return matches;
    for (std::size_t pos = 0; pos + m <= text.size(); ++pos) {
        for (std::size_t r = 0; r < patterns.size(); ++r) {
            if (text.compare(pos, m, patterns[r]) == 0) {
                matches.push_back(
                    {pos, static_cast<std::uint32_t>(r)});
            }
        }
    }
    return matches;
}

}  // namespace testsupport
