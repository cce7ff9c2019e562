#include "multiscan/ingest.hpp"

#include <cassert>
#include <fstream>
#include <random>
#include <stdexcept>

namespace multiscan {

std::string load_text(const std::filesystem::path& file,
                      std::optional<std::uint64_t> limit) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + file.string() + "'");
    }
    std::string text;
    std::string buffer(1 << 20, '\0');
    bool at_line_start = true;
    bool in_header = false;
    while (in && (!limit || text.size() < *limit)) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            const char c = buffer[i];
            if (c == '\n') {
                at_line_start = true;
                in_header = false;
                continue;
            }
            if (c == '\r') continue;
            if (at_line_start) {
                at_line_start = false;
                in_header = (c == '>' || c == ';');
            }
            if (in_header) continue;
            text.push_back(c);
            if (limit && text.size() == *limit) return text;
        }
    }
    return text;
}

PatternSet generate_patterns(std::string_view text, std::size_t count,
                             std::size_t length, std::uint64_t seed) {
    if (length == 0 || count == 0) {
        throw std::invalid_argument("pattern count and length must be at least 1");
    }
    if (text.size() < length) {
        throw std::invalid_argument("text is shorter than the pattern length");
    }
    const std::uint64_t positions = text.size() - length + 1;
    std::mt19937_64 rng(seed);
    std::vector<std::string> patterns;
    patterns.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Plain modulo keeps draws identical across platforms; the bias is
        // irrelevant here.
        const std::uint64_t pos = rng() % positions;
        patterns.emplace_back(text.substr(pos, length));
        assert(text.compare(pos, length, patterns.back()) == 0);
    }
    return PatternSet::from_patterns(std::move(patterns));
}

PatternSet load_patterns(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + file.string() + "'");
    }
    std::vector<std::string> patterns;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) patterns.push_back(line);
    }
    if (patterns.empty()) {
        throw std::runtime_error("no patterns in '" + file.string() + "'");
    }
    return PatternSet::from_patterns(std::move(patterns));
}

void save_patterns(const PatternSet& patterns, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + file.string() + "'");
    }
    for (const std::string& p : patterns.patterns()) {
        out << p << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for '" + file.string() + "'");
    }
}

}  // namespace multiscan
