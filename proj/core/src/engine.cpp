#include "multiscan/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace multiscan {

namespace {

class AcMatcher final : public Matcher {
  public:
    AcMatcher(const PatternSet& patterns, AcCompileMode mode)
        : automaton_(build_automaton(patterns, mode)) {}

    MatchCount count(std::string_view text, const Chunk& chunk) const override {
        return ac_search(automaton_, text, chunk.base_start, chunk.scan_stop);
    }

    void find(std::string_view text, const Chunk& chunk,
              std::vector<Match>& out) const override {
        auto matches = ac_find(automaton_, text, chunk.base_start, chunk.scan_stop);
        out.insert(out.end(), matches.begin(), matches.end());
    }

    std::size_t pattern_length() const override { return automaton_.pattern_length(); }
    Algorithm algorithm() const override { return Algorithm::aho_corasick; }

  private:
    AcAutomaton automaton_;
};

class WmMatcher final : public Matcher {
  public:
    WmMatcher(const PatternSet& patterns, const WmParams& params)
        : patterns_(patterns), tables_(wm_preprocess(patterns, params)) {}

    MatchCount count(std::string_view text, const Chunk& chunk) const override {
        // wm_search scans alignments starting in the base range and clamps
        // its own overlap at the text end, which coincides with scan_stop.
        return wm_search(tables_, patterns_, text, chunk.base_start, chunk.base_end);
    }

    void find(std::string_view text, const Chunk& chunk,
              std::vector<Match>& out) const override {
        auto matches =
            wm_find(tables_, patterns_, text, chunk.base_start, chunk.base_end);
        out.insert(out.end(), matches.begin(), matches.end());
    }

    std::size_t pattern_length() const override { return tables_.pattern_length(); }
    Algorithm algorithm() const override { return Algorithm::wu_manber; }

  private:
    PatternSet patterns_;
    WmTables tables_;
};

}  // namespace

std::unique_ptr<Matcher> make_ac_matcher(const PatternSet& patterns,
                                         AcCompileMode mode) {
    return std::make_unique<AcMatcher>(patterns, mode);
}

std::unique_ptr<Matcher> make_wm_matcher(const PatternSet& patterns,
                                         const WmParams& params) {
    return std::make_unique<WmMatcher>(patterns, params);
}

std::unique_ptr<Matcher> make_matcher(Algorithm algorithm, const PatternSet& patterns,
                                      const WmParams& params) {
    if (algorithm == Algorithm::aho_corasick) return make_ac_matcher(patterns);
    return make_wm_matcher(patterns, params);
}

MatchCount reduce(const CountVector& per_worker) {
    MatchCount total = 0;
    for (const std::uint64_t count : per_worker) total += count;
    return total;
}

Engine::Engine(std::uint32_t worker_count) : worker_count_(worker_count) {
    if (worker_count == 0) {
        throw std::invalid_argument("worker count must be at least 1");
    }
    threads_.reserve(worker_count);
    for (std::uint32_t id = 0; id < worker_count; ++id) {
        threads_.emplace_back([this, id] { worker_loop(id); });
    }
}

Engine::~Engine() {
    {
        std::lock_guard lock(mutex_);
        shutting_down_ = true;
    }
    work_ready_.notify_all();
    for (std::thread& t : threads_) t.join();
}

void Engine::worker_loop(std::uint32_t id) {
    std::uint64_t seen_generation = 0;
    for (;;) {
        std::unique_lock lock(mutex_);
        work_ready_.wait(lock, [&] {
            return shutting_down_ || generation_ != seen_generation;
        });
        if (shutting_down_) return;
        seen_generation = generation_;
        const Matcher* matcher = matcher_;
        const std::string_view text = text_;
        const Chunk chunk = plan_->chunks[id];
        const std::optional<TileConfig> tile = tile_;
        CountVector* out = out_;
        auto* errors = errors_;
        lock.unlock();

        try {
            std::uint64_t count = 0;
            if (tile.has_value()) {
                for (const Chunk& t : tiles(chunk, *tile, plan_->pattern_length)) {
                    count += matcher->count(text, t);
                }
            } else {
                count = matcher->count(text, chunk);
            }
            (*out)[id] = count;
        } catch (...) {
            (*errors)[id] = std::current_exception();
        }

        lock.lock();
        if (--remaining_ == 0) {
            lock.unlock();
            work_done_.notify_all();
        }
    }
}

CountVector Engine::scan(const Matcher& matcher, std::string_view text,
                         std::optional<TileConfig> tile) {
    const PartitionPlan plan =
        make_plan(text.size(), matcher.pattern_length(), worker_count_);
    CountVector out(worker_count_, 0);
    std::vector<std::exception_ptr> errors(worker_count_);

    {
        std::lock_guard lock(mutex_);
        matcher_ = &matcher;
        text_ = text;
        plan_ = &plan;
        tile_ = tile;
        out_ = &out;
        errors_ = &errors;
        remaining_ = worker_count_;
        ++generation_;
    }
    work_ready_.notify_all();

    {
        std::unique_lock lock(mutex_);
        work_done_.wait(lock, [&] { return remaining_ == 0; });
        matcher_ = nullptr;
        plan_ = nullptr;
        out_ = nullptr;
        errors_ = nullptr;
    }

    for (std::uint32_t id = 0; id < worker_count_; ++id) {
        if (errors[id]) {
            try {
                std::rethrow_exception(errors[id]);
            } catch (const std::exception& e) {
                throw std::runtime_error("worker " + std::to_string(id) +
                                         " failed: " + e.what());
            }
        }
    }
    return out;
}

ParallelResult Engine::run(const Matcher& matcher, std::string_view text,
                           std::optional<TileConfig> tile) {
    ParallelResult result;
    result.per_worker = scan(matcher, text, tile);
    result.total = reduce(result.per_worker);
    return result;
}

ParallelResult parallel_count(const Matcher& matcher, std::string_view text,
                              std::uint32_t worker_count,
                              std::optional<TileConfig> tile) {
    Engine engine(worker_count);
    return engine.run(matcher, text, tile);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

}  // namespace

TimingReport timed_run(Algorithm algorithm, const PatternSet& patterns,
                       std::string_view text, std::uint32_t worker_count,
                       std::uint32_t repeats, std::optional<TileConfig> tile,
                       const WmParams& wm_params) {
    if (repeats == 0) {
        throw std::invalid_argument("repeats must be at least 1");
    }
    TimingReport report;
    Engine engine(worker_count);
    for (std::uint32_t rep = 0; rep < repeats; ++rep) {
        PhaseTimings timings;

        auto t0 = std::chrono::steady_clock::now();
        const auto matcher = make_matcher(algorithm, patterns, wm_params);
        timings.preprocess_seconds = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        CountVector per_worker = engine.scan(*matcher, text, tile);
        timings.search_seconds = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const MatchCount total = reduce(per_worker);
        timings.reduce_seconds = seconds_since(t0);

        if (rep == 0) {
            report.total = total;
            report.per_worker = std::move(per_worker);
        } else if (total != report.total) {
            throw std::runtime_error("count changed across repeats");
        }
        report.samples.push_back(timings);
    }

    std::vector<double> pre, search, red;
    for (const PhaseTimings& t : report.samples) {
        pre.push_back(t.preprocess_seconds);
        search.push_back(t.search_seconds);
        red.push_back(t.reduce_seconds);
    }
    report.median.preprocess_seconds = median_of(std::move(pre));
    report.median.search_seconds = median_of(std::move(search));
    report.median.reduce_seconds = median_of(std::move(red));
    return report;
}

}  // namespace multiscan
