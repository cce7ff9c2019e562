#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "multiscan/aho_corasick.hpp"
#include "multiscan/core.hpp"
#include "multiscan/partition.hpp"
#include "multiscan/wu_manber.hpp"

// Shared-memory parallel executor: a pool of long-lived workers, each
// statically assigned one chunk of the partition plan. Workers write their
// match count into their own slot of the out vector; the reduction to a
// total is a separate sequential step after all workers finish.

namespace multiscan {

/// A compiled searcher over shared immutable tables. Stateless between
/// calls: identical chunks give identical counts, so instances are safe to
/// use from any number of threads at once.
class Matcher {
  public:
    virtual ~Matcher() = default;
    virtual MatchCount count(std::string_view text, const Chunk& chunk) const = 0;
    virtual void find(std::string_view text, const Chunk& chunk,
                      std::vector<Match>& out) const = 0;
    virtual std::size_t pattern_length() const = 0;
    virtual Algorithm algorithm() const = 0;
};

std::unique_ptr<Matcher> make_ac_matcher(
    const PatternSet& patterns, AcCompileMode mode = AcCompileMode::supply_links);
std::unique_ptr<Matcher> make_wm_matcher(const PatternSet& patterns,
                                         const WmParams& params = {});
std::unique_ptr<Matcher> make_matcher(Algorithm algorithm, const PatternSet& patterns,
                                      const WmParams& params = {});

/// Per-worker match counts, indexed by worker id.
using CountVector = std::vector<std::uint64_t>;

/// Sequential reduction of the per-worker counts.
MatchCount reduce(const CountVector& per_worker);

struct ParallelResult {
    CountVector per_worker;
    MatchCount total = 0;
};

class Engine {
  public:
    explicit Engine(std::uint32_t worker_count);
    ~Engine();

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    std::uint32_t worker_count() const { return worker_count_; }

    /// Scans the text under a fresh partition plan and returns the
    /// per-worker counts. Blocking; call from one thread at a time. A
    /// worker failure aborts the whole run with the worker identified.
    CountVector scan(const Matcher& matcher, std::string_view text,
                     std::optional<TileConfig> tile = std::nullopt);

    /// scan + reduce.
    ParallelResult run(const Matcher& matcher, std::string_view text,
                       std::optional<TileConfig> tile = std::nullopt);

  private:
    void worker_loop(std::uint32_t id);

    const std::uint32_t worker_count_;
    std::vector<std::thread> threads_;

    std::mutex mutex_;
    std::condition_variable work_ready_;
    std::condition_variable work_done_;
    std::uint64_t generation_ = 0;
    std::uint32_t remaining_ = 0;
    bool shutting_down_ = false;

    // Job shared with the workers for the current generation.
    const Matcher* matcher_ = nullptr;
    std::string_view text_;
    const PartitionPlan* plan_ = nullptr;
    std::optional<TileConfig> tile_;
    CountVector* out_ = nullptr;
    std::vector<std::exception_ptr>* errors_ = nullptr;
};

/// One-shot convenience: builds a transient Engine and runs once.
ParallelResult parallel_count(const Matcher& matcher, std::string_view text,
                              std::uint32_t worker_count,
                              std::optional<TileConfig> tile = std::nullopt);

struct PhaseTimings {
    double preprocess_seconds = 0;
    double search_seconds = 0;
    double reduce_seconds = 0;
};

struct TimingReport {
    std::vector<PhaseTimings> samples;  // one per repeat
    PhaseTimings median;                // per-phase median over the samples
    MatchCount total = 0;               // identical across repeats
    CountVector per_worker;
};

/// Rebuilds the matcher and rescans `repeats` times, timing each phase on
/// the monotonic clock. Counts are checked to be identical across repeats.
TimingReport timed_run(Algorithm algorithm, const PatternSet& patterns,
                       std::string_view text, std::uint32_t worker_count,
                       std::uint32_t repeats,
                       std::optional<TileConfig> tile = std::nullopt,
                       const WmParams& wm_params = {});

}  // namespace multiscan
