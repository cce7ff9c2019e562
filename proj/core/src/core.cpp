#include "multiscan/core.hpp"

#include <cstring>
#include <stdexcept>

namespace multiscan {

const char* algorithm_name(Algorithm algo) {
    return algo == Algorithm::aho_corasick ? "ac" : "wm";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "ac") return Algorithm::aho_corasick;
    if (name == "wm") return Algorithm::wu_manber;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected 'ac' or 'wm')");
}

PatternSet PatternSet::from_patterns(std::vector<std::string> patterns) {
    if (patterns.empty()) {
        throw std::invalid_argument("pattern set must contain at least one pattern");
    }
    const std::size_t length = patterns.front().size();
    if (length == 0) {
        throw std::invalid_argument("patterns must be non-empty");
    }
    for (const std::string& p : patterns) {
        if (p.size() != length) {
            throw std::invalid_argument("patterns must all have the same length");
        }
    }
    return PatternSet(std::move(patterns), length);
}

MatchCount naive_count(std::string_view text, const PatternSet& patterns) {
    const std::size_t m = patterns.length();
    if (text.size() < m) return 0;
    MatchCount total = 0;
    for (std::size_t pos = 0; pos + m <= text.size(); ++pos) {
        for (std::size_t r = 0; r < patterns.size(); ++r) {
            if (std::memcmp(text.data() + pos, patterns[r].data(), m) == 0) {
                ++total;
            }
        }
    }
    return total;
}

}  // namespace multiscan
