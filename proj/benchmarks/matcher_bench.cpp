#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "multiscan/aho_corasick.hpp"
#include "multiscan/engine.hpp"
#include "multiscan/ingest.hpp"
#include "multiscan/wu_manber.hpp"

using namespace multiscan;

namespace {

std::string dna_text(std::size_t length) {
    static constexpr char kBases[] = {'a', 'c', 'g', 't'};
    std::mt19937_64 rng(1);
    std::string text(length, '\0');
    for (char& c : text) c = kBases[rng() % 4];
    return text;
}

const std::string& corpus() {
    static const std::string text = dna_text(8u << 20);
    return text;
}

void bm_ac_preprocess(benchmark::State& state) {
    const auto set = generate_patterns(corpus(), state.range(0), 8, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_automaton(set));
    }
}
BENCHMARK(bm_ac_preprocess)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

void bm_wm_preprocess(benchmark::State& state) {
    const auto set = generate_patterns(corpus(), state.range(0), 8, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wm_preprocess(set));
    }
}
BENCHMARK(bm_wm_preprocess)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

void bm_ac_search(benchmark::State& state) {
    const std::string& text = corpus();
    const auto set = generate_patterns(text, state.range(0), 8, 7);
    const AcAutomaton automaton = build_automaton(set);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ac_search(automaton, text, 0, text.size()));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(bm_ac_search)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

void bm_ac_search_precomputed(benchmark::State& state) {
    const std::string& text = corpus();
    const auto set = generate_patterns(text, state.range(0), 8, 7);
    const AcAutomaton automaton =
        build_automaton(set, AcCompileMode::precomputed);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ac_search(automaton, text, 0, text.size()));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(bm_ac_search_precomputed)
    ->Arg(1000)
    ->Arg(8000)
    ->Unit(benchmark::kMillisecond);

void bm_wm_search(benchmark::State& state) {
    const std::string& text = corpus();
    const auto set = generate_patterns(text, state.range(0), 8, 7);
    const WmTables tables = wm_preprocess(set);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wm_search(tables, set, text, 0, text.size()));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(bm_wm_search)->Arg(1000)->Arg(8000)->Unit(benchmark::kMillisecond);

void bm_parallel_ac(benchmark::State& state) {
    const std::string& text = corpus();
    const auto set = generate_patterns(text, 8000, 8, 7);
    const auto matcher = make_ac_matcher(set);
    Engine engine(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.run(*matcher, text).total);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(text.size()));
}
BENCHMARK(bm_parallel_ac)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(
    benchmark::kMillisecond);

void bm_tiled_ac(benchmark::State& state) {
    const std::string& text = corpus();
    const auto set = generate_patterns(text, 8000, 8, 7);
    const auto matcher = make_ac_matcher(set);
    Engine engine(4);
    const TileConfig tile{static_cast<std::uint64_t>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.run(*matcher, text, tile).total);
    }
}
BENCHMARK(bm_tiled_ac)->Arg(16128)->Arg(65536)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
