// multiscan: multi-pattern exact string search over large texts.
//
// Subcommands: search (count occurrences of a fixed-length pattern set),
// bench (timing matrix with CSV output), genpatterns (sample a pattern
// set from a text), worker / coordinate (distributed counting over TCP).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multiscan/cluster.hpp"
#include "multiscan/core.hpp"
#include "multiscan/engine.hpp"
#include "multiscan/ingest.hpp"
#include "multiscan/wu_manber.hpp"

using namespace multiscan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

struct WmFlags {
    std::uint32_t suffix_block = 3;
    std::uint32_t prefix_block = 2;
    std::uint32_t bitshift = 2;

    WmParams params() const { return {suffix_block, prefix_block, bitshift}; }

    void attach(CLI::App* cmd) {
        cmd->add_option("--wm-suffix-block", suffix_block,
                        "Suffix block size for wu-manber (default 3)");
        cmd->add_option("--wm-prefix-block", prefix_block,
                        "Prefix block size for wu-manber (default 2)");
        cmd->add_option("--wm-bitshift", bitshift,
                        "Left shift per character in the block hash (default 2)");
    }
};

// --- search ---

struct SearchOptions {
    std::string algo = "ac";
    std::string text_file;
    std::string patterns_file;
    std::uint32_t workers = 1;
    std::optional<std::uint64_t> tile;
    std::optional<std::uint64_t> limit;
    bool positions = false;
    WmFlags wm;
};

int cmd_search(const SearchOptions& options) {
    Algorithm algorithm;
    std::string text;
    std::optional<PatternSet> patterns;
    std::unique_ptr<Matcher> matcher;
    double load_seconds = 0;
    double preprocess_seconds = 0;
    try {
        algorithm = parse_algorithm(options.algo);
        auto t0 = std::chrono::steady_clock::now();
        text = load_text(options.text_file, options.limit);
        load_seconds = seconds_since(t0);
        if (text.empty()) {
            std::cerr << "warning: no usable characters in " << options.text_file
                      << "\n";
        }
        patterns = load_patterns(options.patterns_file);
        if (options.tile && *options.tile < patterns->length()) {
            throw std::invalid_argument("--tile must be >= the pattern length");
        }
        t0 = std::chrono::steady_clock::now();
        matcher = make_matcher(algorithm, *patterns, options.wm.params());
        preprocess_seconds = seconds_since(t0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::optional<TileConfig> tile;
        if (options.tile) tile = TileConfig{*options.tile};

        Engine engine(options.workers);
        auto t0 = std::chrono::steady_clock::now();
        const CountVector per_worker = engine.scan(*matcher, text, tile);
        const double search_seconds = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const MatchCount total = reduce(per_worker);
        const double reduce_seconds = seconds_since(t0);

        std::printf("algo: %s\n", algorithm_name(algorithm));
        std::printf("text: %s (%zu bytes)\n", options.text_file.c_str(),
                    text.size());
        std::printf("patterns: %zu x %zu\n", patterns->size(), patterns->length());
        std::printf("workers: %u\n", options.workers);
        std::printf("total: %llu\n", static_cast<unsigned long long>(total));
        std::printf("per_worker:");
        for (const std::uint64_t count : per_worker) {
            std::printf(" %llu", static_cast<unsigned long long>(count));
        }
        std::printf("\n");
        std::printf("load_seconds: %.6f\n", load_seconds);
        std::printf("preprocess_seconds: %.6f\n", preprocess_seconds);
        std::printf("search_seconds: %.6f\n", search_seconds);
        std::printf("reduce_seconds: %.6f\n", reduce_seconds);

        if (options.positions) {
            std::vector<Match> matches;
            matcher->find(text, Chunk{0, 0, text.size(), text.size()}, matches);
            std::sort(matches.begin(), matches.end());
            std::printf("positions:\n");
            for (const Match& match : matches) {
                std::printf("%llu %u\n",
                            static_cast<unsigned long long>(match.position),
                            match.pattern);
            }
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

// --- bench ---

struct BenchOptions {
    std::string text_file;
    std::vector<std::string> algos = {"ac", "wm"};
    std::vector<std::size_t> pattern_sizes = {8};
    std::vector<std::size_t> set_sizes = {1000, 8000, 16000};
    std::vector<std::uint32_t> workers = {1};
    std::uint32_t repeats = 3;
    std::string csv_file;
    std::uint64_t seed = 42;
    std::optional<std::uint64_t> limit;
    WmFlags wm;
};

/// Search-time ratios observed for the three canonical set sizes at m = 8;
/// printed next to measured values for qualitative comparison.
const std::map<std::size_t, double> kReferenceAcWmRatio = {
    {1000, 1.49}, {8000, 5.05}, {16000, 7.97}};

int cmd_bench(const BenchOptions& options) {
    std::string text;
    std::vector<Algorithm> algorithms;
    std::ofstream csv;
    try {
        for (const std::string& name : options.algos) {
            algorithms.push_back(parse_algorithm(name));
        }
        if (options.pattern_sizes.empty() || options.set_sizes.empty() ||
            options.workers.empty() || options.repeats == 0) {
            throw std::invalid_argument("empty benchmark parameter list");
        }
        text = load_text(options.text_file, options.limit);
        for (const std::size_t m : options.pattern_sizes) {
            if (text.size() < m) {
                throw std::invalid_argument(
                    "text shorter than pattern size " + std::to_string(m));
            }
        }
        csv.open(options.csv_file);
        if (!csv) {
            throw std::invalid_argument("cannot write CSV file '" +
                                        options.csv_file + "'");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        csv << "algo,d,m,workers,phase,median_seconds,count,speedup_vs_1worker\n";

        struct Key {
            std::string algo;
            std::size_t d, m;
            std::string phase;
            auto operator<=>(const Key&) const = default;
        };
        std::map<Key, double> baseline;  // medians at W = 1

        // Measured search medians at the smallest worker count, for the
        // cross-algorithm ratio report.
        std::map<std::pair<std::size_t, std::size_t>, std::map<std::string, double>>
            search_at_min_w;
        const std::uint32_t min_w =
            *std::min_element(options.workers.begin(), options.workers.end());

        for (const std::size_t m : options.pattern_sizes) {
            for (const std::size_t d : options.set_sizes) {
                const PatternSet set =
                    generate_patterns(text, d, m, options.seed);
                for (const Algorithm algorithm : algorithms) {
                    for (const std::uint32_t w : options.workers) {
                        const TimingReport report =
                            timed_run(algorithm, set, text, w, options.repeats,
                                      std::nullopt, options.wm.params());
                        const std::string algo_name = algorithm_name(algorithm);
                        std::printf(
                            "%s d=%zu m=%zu W=%u: count=%llu search=%.4fs "
                            "preprocess=%.4fs\n",
                            algo_name.c_str(), d, m, w,
                            static_cast<unsigned long long>(report.total),
                            report.median.search_seconds,
                            report.median.preprocess_seconds);

                        const std::pair<std::string, double> phases[] = {
                            {"preprocess", report.median.preprocess_seconds},
                            {"search", report.median.search_seconds},
                            {"reduce", report.median.reduce_seconds}};
                        for (const auto& [phase, median] : phases) {
                            if (w == 1) baseline[{algo_name, d, m, phase}] = median;
                            csv << algo_name << ',' << d << ',' << m << ',' << w
                                << ',' << phase << ',';
                            csv.precision(9);
                            csv << std::fixed << median << ',' << report.total
                                << ',';
                            const auto base =
                                baseline.find({algo_name, d, m, phase});
                            if (base != baseline.end() && median > 0) {
                                csv.precision(3);
                                csv << std::fixed << base->second / median;
                            }
                            csv << '\n';
                        }
                        if (w == min_w) {
                            search_at_min_w[{d, m}][algo_name] =
                                report.median.search_seconds;
                        }
                    }
                }
            }
        }

        for (const auto& [key, by_algo] : search_at_min_w) {
            const auto ac = by_algo.find("ac");
            const auto wm = by_algo.find("wm");
            if (ac == by_algo.end() || wm == by_algo.end() || ac->second <= 0) {
                continue;
            }
            std::printf("ac-vs-wm search ratio (d=%zu, m=%zu, W=%u): %.2fx",
                        key.first, key.second, min_w, wm->second / ac->second);
            const auto reference = kReferenceAcWmRatio.find(key.first);
            if (key.second == 8 && reference != kReferenceAcWmRatio.end()) {
                std::printf(" (reference %.2fx)", reference->second);
            }
            std::printf("\n");
        }
        std::printf("csv: %s\n", options.csv_file.c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

// --- genpatterns ---

struct GenPatternsOptions {
    std::string text_file;
    std::size_t count = 1000;
    std::size_t length = 8;
    std::uint64_t seed = 42;
    std::string out_file;
    std::optional<std::uint64_t> limit;
};

int cmd_genpatterns(const GenPatternsOptions& options) {
    try {
        const std::string text = load_text(options.text_file, options.limit);
        const PatternSet set =
            generate_patterns(text, options.count, options.length, options.seed);
        save_patterns(set, options.out_file);
        std::printf("wrote %zu patterns of length %zu to %s\n", set.size(),
                    set.length(), options.out_file.c_str());
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// --- worker ---

int cmd_worker(const std::string& listen) {
    std::unique_ptr<WorkerServer> server;
    try {
        server = std::make_unique<WorkerServer>(listen);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::printf("listening on %s\n", server->address().c_str());
    std::fflush(stdout);
    try {
        server->run();
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

// --- coordinate ---

struct CoordinateOptions {
    std::vector<std::string> workers;
    std::string algo = "ac";
    std::string text_file;
    std::string patterns_file;
    std::uint32_t node_workers = 1;
    bool ship_inline = false;
    WmFlags wm;
};

int cmd_coordinate(const CoordinateOptions& options) {
    // Cluster mode operates on the file's raw bytes so that byte ranges
    // mean the same thing on every node; prepare FASTA-style inputs first
    // (see the README).
    ClusterJob job;
    std::string inline_text;
    try {
        job.algorithm = parse_algorithm(options.algo);
        job.patterns = load_patterns(options.patterns_file).patterns();
        job.wm_params = options.wm.params();
        job.local_workers = options.node_workers;
        if (options.ship_inline) {
            std::ifstream in(options.text_file, std::ios::binary);
            if (!in) {
                throw std::invalid_argument("cannot open '" + options.text_file +
                                            "'");
            }
            std::ostringstream buffer;
            buffer << in.rdbuf();
            inline_text = std::move(buffer).str();
            job.text = inline_text;
            job.text_length = inline_text.size();
        } else {
            job.shared_path = options.text_file;
            job.text_length = std::filesystem::file_size(options.text_file);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        const ClusterResult result = coordinate(options.workers, job);
        for (const NodeReport& node : result.nodes) {
            std::printf("node %u (%s): range [%llu, %llu) count %llu "
                        "load %.4fs preprocess %.4fs search %.4fs reduce %.4fs\n",
                        node.rank, node.endpoint.c_str(),
                        static_cast<unsigned long long>(node.start),
                        static_cast<unsigned long long>(node.stop),
                        static_cast<unsigned long long>(node.count),
                        node.load_seconds, node.preprocess_seconds,
                        node.search_seconds, node.reduce_seconds);
        }
        std::printf("total: %llu\n", static_cast<unsigned long long>(result.total));
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-pattern exact string matching engine"};
    app.require_subcommand(1);

    SearchOptions search;
    CLI::App* search_cmd =
        app.add_subcommand("search", "Count pattern occurrences in a text");
    search_cmd->add_option("--algo", search.algo, "Algorithm: ac or wm")
        ->default_val("ac");
    search_cmd->add_option("--text", search.text_file, "Input text file")
        ->required();
    search_cmd->add_option("--patterns", search.patterns_file,
                           "Pattern file, one per line")
        ->required();
    search_cmd->add_option("--workers", search.workers, "Worker thread count")
        ->default_val(1);
    std::uint64_t search_tile = 0;
    CLI::Option* tile_opt = search_cmd->add_option(
        "--tile", search_tile, "Tile size for the streaming scan");
    std::uint64_t search_limit = 0;
    CLI::Option* search_limit_opt = search_cmd->add_option(
        "--limit", search_limit, "Use only the first N characters of the text");
    search_cmd->add_flag("--positions", search.positions,
                         "Also list matches as 'position pattern-index'");
    search.wm.attach(search_cmd);

    BenchOptions bench;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Timing matrix over (algo, d, m, workers)");
    bench_cmd->add_option("--text", bench.text_file, "Input text file")
        ->required();
    bench_cmd->add_option("--algos", bench.algos, "Algorithms to run")
        ->delimiter(',');
    bench_cmd->add_option("--pattern-sizes", bench.pattern_sizes,
                          "Pattern lengths (m values)")
        ->delimiter(',');
    bench_cmd->add_option("--set-sizes", bench.set_sizes,
                          "Pattern counts (d values)")
        ->delimiter(',');
    bench_cmd->add_option("--workers", bench.workers, "Worker counts")
        ->delimiter(',');
    bench_cmd->add_option("--repeats", bench.repeats, "Repeats per cell")
        ->default_val(3);
    bench_cmd->add_option("--csv", bench.csv_file, "CSV output path")->required();
    bench_cmd->add_option("--seed", bench.seed, "Pattern sampling seed")
        ->default_val(42);
    std::uint64_t bench_limit = 0;
    CLI::Option* bench_limit_opt = bench_cmd->add_option(
        "--limit", bench_limit, "Use only the first N characters of the text");
    bench.wm.attach(bench_cmd);

    GenPatternsOptions gen;
    CLI::App* gen_cmd = app.add_subcommand(
        "genpatterns", "Sample a pattern set from subsequences of a text");
    gen_cmd->add_option("--text", gen.text_file, "Input text file")->required();
    gen_cmd->add_option("--count", gen.count, "Number of patterns (d)")
        ->required();
    gen_cmd->add_option("--length", gen.length, "Pattern length (m)")->required();
    gen_cmd->add_option("--seed", gen.seed, "Sampling seed")->default_val(42);
    gen_cmd->add_option("--out", gen.out_file, "Output pattern file")->required();
    std::uint64_t gen_limit = 0;
    CLI::Option* gen_limit_opt = gen_cmd->add_option(
        "--limit", gen_limit, "Use only the first N characters of the text");

    std::string listen_address;
    CLI::App* worker_cmd =
        app.add_subcommand("worker", "Serve byte-range assignments over TCP");
    worker_cmd
        ->add_option("--listen", listen_address, "host:port to listen on")
        ->envname("MULTISCAN_LISTEN")
        ->required();

    CoordinateOptions coord;
    CLI::App* coord_cmd = app.add_subcommand(
        "coordinate", "Split a job across worker processes and sum the counts");
    coord_cmd
        ->add_option("--workers", coord.workers,
                     "Comma-separated worker endpoints (host:port)")
        ->delimiter(',')
        ->required();
    coord_cmd->add_option("--algo", coord.algo, "Algorithm: ac or wm")
        ->default_val("ac");
    coord_cmd->add_option("--text", coord.text_file, "Shared input text file")
        ->required();
    coord_cmd->add_option("--patterns", coord.patterns_file,
                          "Pattern file, one per line")
        ->required();
    coord_cmd->add_option("--node-workers", coord.node_workers,
                          "Threads per worker node")
        ->default_val(1);
    coord_cmd->add_flag("--ship-inline", coord.ship_inline,
                        "Ship text slices in the assignment instead of a path");
    coord.wm.attach(coord_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (search_cmd->parsed()) {
        if (tile_opt->count() > 0) search.tile = search_tile;
        if (search_limit_opt->count() > 0) search.limit = search_limit;
        return cmd_search(search);
    }
    if (bench_cmd->parsed()) {
        if (bench_limit_opt->count() > 0) bench.limit = bench_limit;
        return cmd_bench(bench);
    }
    if (gen_cmd->parsed()) {
        if (gen_limit_opt->count() > 0) gen.limit = gen_limit;
        return cmd_genpatterns(gen);
    }
    if (worker_cmd->parsed()) {
        return cmd_worker(listen_address);
    }
    if (coord_cmd->parsed()) {
        return cmd_coordinate(coord);
    }
    return kExitUsage;
}
