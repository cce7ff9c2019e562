#include "multiscan/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace multiscan {

std::uint64_t PartitionPlan::scanned_characters() const {
    std::uint64_t total = 0;
    for (const Chunk& chunk : chunks) {
        total += chunk.scan_stop - chunk.base_start;
    }
    return total;
}

namespace {

std::uint64_t balanced_split(std::uint32_t index, std::uint32_t parts,
                             std::uint64_t n) {
    // 128-bit intermediate keeps index * n exact for any plausible n.
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(index) * n / parts);
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> chunk_bounds(std::uint32_t worker_id,
                                                     std::uint32_t worker_count,
                                                     std::uint64_t text_length,
                                                     std::uint64_t pattern_length) {
    if (worker_count == 0 || worker_id >= worker_count) {
        throw std::invalid_argument("worker id outside [0, worker_count)");
    }
    if (pattern_length == 0) {
        throw std::invalid_argument("pattern length must be at least 1");
    }
    const std::uint64_t start = balanced_split(worker_id, worker_count, text_length);
    const std::uint64_t base_end =
        balanced_split(worker_id + 1, worker_count, text_length);
    const std::uint64_t stop = std::min(base_end + pattern_length - 1, text_length);
    return {start, stop};
}

PartitionPlan make_plan(std::uint64_t text_length, std::uint64_t pattern_length,
                        std::uint32_t worker_count) {
    if (worker_count == 0) {
        throw std::invalid_argument("worker count must be at least 1");
    }
    if (pattern_length == 0) {
        throw std::invalid_argument("pattern length must be at least 1");
    }
    PartitionPlan plan;
    plan.text_length = text_length;
    plan.pattern_length = pattern_length;
    plan.worker_count = worker_count;
    plan.chunks.reserve(worker_count);
    for (std::uint32_t w = 0; w < worker_count; ++w) {
        Chunk chunk;
        chunk.worker_id = w;
        chunk.base_start = balanced_split(w, worker_count, text_length);
        chunk.base_end = balanced_split(w + 1, worker_count, text_length);
        chunk.scan_stop = std::min(chunk.base_end + pattern_length - 1, text_length);
        plan.chunks.push_back(chunk);
    }
    return plan;
}

std::vector<Chunk> tiles(const Chunk& chunk, const TileConfig& config,
                         std::uint64_t pattern_length) {
    if (pattern_length == 0 || config.tile_size < pattern_length) {
        throw std::invalid_argument("tile size must be at least the pattern length");
    }
    std::vector<Chunk> result;
    for (std::uint64_t start = chunk.base_start; start < chunk.base_end;
         start += config.tile_size) {
        Chunk tile;
        tile.worker_id = chunk.worker_id;
        tile.base_start = start;
        tile.base_end = std::min(start + config.tile_size, chunk.base_end);
        tile.scan_stop =
            std::min(tile.base_end + pattern_length - 1, chunk.scan_stop);
        result.push_back(tile);
    }
    return result;
}

}  // namespace multiscan
