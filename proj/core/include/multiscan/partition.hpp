#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Chunking arithmetic for data-parallel scanning. Base ranges tile the
// text exactly; each worker additionally scans m - 1 overlap characters
// past its base range (clamped at the text end) so that every occurrence
// is counted by exactly one worker — the one whose base range contains the
// occurrence's start position.

namespace multiscan {

struct Chunk {
    std::uint32_t worker_id = 0;
    std::uint64_t base_start = 0;  // first byte this worker is responsible for
    std::uint64_t base_end = 0;    // one past the last owned byte
    std::uint64_t scan_stop = 0;   // min(base_end + m - 1, n)

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct PartitionPlan {
    std::uint64_t text_length = 0;     // n
    std::uint64_t pattern_length = 0;  // m
    std::uint32_t worker_count = 0;
    std::vector<Chunk> chunks;

    /// Sum of scan range lengths across workers.
    std::uint64_t scanned_characters() const;
    /// Extra characters scanned beyond n; equals (m - 1) * (W - 1) when no
    /// chunk is clamped at the text end.
    std::uint64_t overlap_surplus() const { return scanned_characters() - text_length; }
};

/// Byte range for one worker: start = floor(w * n / W) and
/// stop = floor((w + 1) * n / W) + (m - 1) clamped to n. Base sizes differ
/// by at most one; for W | n this is exactly start = w * n/W,
/// stop = (w + 1) * n/W + m - 1.
/// Throws std::invalid_argument when worker_id >= worker_count.
std::pair<std::uint64_t, std::uint64_t> chunk_bounds(std::uint32_t worker_id,
                                                     std::uint32_t worker_count,
                                                     std::uint64_t text_length,
                                                     std::uint64_t pattern_length);

PartitionPlan make_plan(std::uint64_t text_length, std::uint64_t pattern_length,
                        std::uint32_t worker_count);

struct TileConfig {
    std::uint64_t tile_size = 16128;  // characters staged per inner pass
};

/// Splits one chunk's base range into consecutive tiles of tile_size
/// characters, each carrying the same m - 1 overlap (clamped at the
/// chunk's scan stop). Scanning the tiles independently and summing
/// equals scanning the chunk in one pass. Throws std::invalid_argument
/// when tile_size < m.
std::vector<Chunk> tiles(const Chunk& chunk, const TileConfig& config,
                         std::uint64_t pattern_length);

}  // namespace multiscan
