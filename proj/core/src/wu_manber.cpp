#include "multiscan/wu_manber.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace multiscan {

std::uint32_t hash_block(std::string_view block, std::uint32_t bitshift) {
    std::uint32_t h = 0;
    for (const char c : block) {
        h = (h << bitshift) + static_cast<std::uint8_t>(c);
    }
    return h;
}

std::size_t hash_table_size(std::uint32_t block_len, std::uint32_t bitshift) {
    std::size_t size = 0;
    std::size_t radix_power = 1;
    for (std::uint32_t i = 0; i < block_len; ++i) {
        size += kAlphabetSize * radix_power;
        radix_power <<= bitshift;
    }
    return size;
}

WmTables wm_preprocess(const PatternSet& patterns, const WmParams& params) {
    if (params.prefix_block < 1 || params.suffix_block < params.prefix_block) {
        throw std::invalid_argument(
            "block sizes must satisfy suffix_block >= prefix_block >= 1");
    }
    if (patterns.length() < params.suffix_block) {
        throw std::invalid_argument("pattern length must be >= the suffix block size");
    }
    const std::size_t m = patterns.length();
    const std::size_t d = patterns.size();
    const std::uint32_t block = params.suffix_block;
    const auto max_shift = static_cast<std::uint32_t>(m - block + 1);

    WmTables tables;
    tables.params_ = params;
    tables.pattern_length_ = m;
    tables.pattern_count_ = d;
    tables.shift_.assign(hash_table_size(block, params.bitshift), max_shift);

    // Minimal safe shift per suffix-block hash: for every block of the
    // pattern ending at position q - 1 (q from m down to block), the window
    // may advance at most m - q once that block is seen at the window end.
    std::vector<std::uint32_t> suffix_hash(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::string& pattern = patterns[i];
        for (std::size_t q = m; q >= block; --q) {
            const std::uint32_t h = hash_block(
                std::string_view(pattern).substr(q - block, block), params.bitshift);
            const auto shift_len = static_cast<std::uint32_t>(m - q);
            tables.shift_[h] = std::min(tables.shift_[h], shift_len);
            if (shift_len == 0) suffix_hash[i] = h;
            ++tables.block_visits_;
        }
    }

    tables.prefix_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        tables.prefix_[i] = hash_block(
            std::string_view(patterns[i]).substr(0, params.prefix_block),
            params.bitshift);
    }

    // CSR buckets: pattern indices grouped by suffix hash, ascending within
    // each bucket, with the prefix hash copied alongside for the scan.
    tables.bucket_offsets_.assign(tables.shift_.size() + 1, 0);
    for (std::size_t i = 0; i < d; ++i) {
        ++tables.bucket_offsets_[suffix_hash[i] + 1];
    }
    for (std::size_t h = 1; h < tables.bucket_offsets_.size(); ++h) {
        tables.bucket_offsets_[h] += tables.bucket_offsets_[h - 1];
    }
    tables.bucket_patterns_.resize(d);
    tables.bucket_prefixes_.resize(d);
    std::vector<std::uint32_t> cursor(tables.bucket_offsets_.begin(),
                                      tables.bucket_offsets_.end() - 1);
    for (std::size_t i = 0; i < d; ++i) {
        const std::uint32_t slot = cursor[suffix_hash[i]]++;
        tables.bucket_patterns_[slot] = static_cast<std::uint32_t>(i);
        tables.bucket_prefixes_[slot] = tables.prefix_[i];
    }
    return tables;
}

namespace {

void check_tables(const WmTables& tables, const PatternSet& patterns) {
    if (tables.pattern_length() != patterns.length() ||
        tables.pattern_count() != patterns.size()) {
        throw std::invalid_argument("tables were built from a different pattern set");
    }
}

void check_range(std::string_view text, std::size_t base, std::size_t base_end) {
    if (base > base_end || base_end > text.size()) {
        throw std::out_of_range("scan range outside the text");
    }
}

}  // namespace

namespace {

struct WmScanView {
    const std::uint32_t* shift;
    const std::uint32_t* bucket_offsets;
    const std::uint32_t* bucket_patterns;
    const std::uint32_t* bucket_prefixes;
    std::size_t m;
    std::uint32_t block;
    std::uint32_t prefix_block;
    std::uint32_t bitshift;
};

template <typename OnMatch>
void wm_scan(const WmScanView& view, const PatternSet& patterns,
             std::string_view text, std::size_t base, std::size_t base_end,
             OnMatch&& on_match) {
    const std::size_t m = view.m;
    const char* data = text.data();

    // End indices covered: matches start in [base, base_end) and must fit
    // inside the text, so the last end index is min(base_end + m - 1, n) - 1.
    const std::size_t scan_stop = std::min(base_end + m - 1, text.size());
    std::size_t i = base + m - 1;
    while (i < scan_stop) {
        const std::uint32_t h =
            hash_block({data + i + 1 - view.block, view.block}, view.bitshift);
        const std::uint32_t shift = view.shift[h];
        if (shift > 0) {
            i += shift;
            continue;
        }
        const std::size_t window = i + 1 - m;
        const std::uint32_t h_prefix =
            hash_block({data + window, view.prefix_block}, view.bitshift);
        const std::uint32_t begin = view.bucket_offsets[h];
        const std::uint32_t end = view.bucket_offsets[h + 1];
        for (std::uint32_t k = begin; k < end; ++k) {
            if (view.bucket_prefixes[k] != h_prefix) continue;
            const std::uint32_t r = view.bucket_patterns[k];
            if (std::memcmp(patterns[r].data(), data + window, m) == 0) {
                on_match(window, r);
            }
        }
        i += 1;
    }
}

}  // namespace

MatchCount wm_search(const WmTables& tables, const PatternSet& patterns,
                     std::string_view text, std::size_t base, std::size_t base_end) {
    check_tables(tables, patterns);
    check_range(text, base, base_end);
    const WmScanView view{tables.shift_.data(),
                          tables.bucket_offsets_.data(),
                          tables.bucket_patterns_.data(),
                          tables.bucket_prefixes_.data(),
                          tables.pattern_length(),
                          tables.params().suffix_block,
                          tables.params().prefix_block,
                          tables.params().bitshift};
    MatchCount count = 0;
    wm_scan(view, patterns, text, base, base_end,
            [&](std::size_t, std::uint32_t) { ++count; });
    return count;
}

std::vector<Match> wm_find(const WmTables& tables, const PatternSet& patterns,
                           std::string_view text, std::size_t base,
                           std::size_t base_end) {
    check_tables(tables, patterns);
    check_range(text, base, base_end);
    const WmScanView view{tables.shift_.data(),
                          tables.bucket_offsets_.data(),
                          tables.bucket_patterns_.data(),
                          tables.bucket_prefixes_.data(),
                          tables.pattern_length(),
                          tables.params().suffix_block,
                          tables.params().prefix_block,
                          tables.params().bitshift};
    std::vector<Match> matches;
    wm_scan(view, patterns, text, base, base_end,
            [&](std::size_t position, std::uint32_t pattern) {
                matches.push_back(Match{position, pattern});
            });
    return matches;
}

}  // namespace multiscan
