#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "multiscan/core.hpp"
#include "multiscan/wire.hpp"

// Distributed mode: a coordinator splits the text into per-node byte
// ranges (same chunk arithmetic as the thread-level partition, overlap
// included), ships one ASSIGN per worker over TCP, and sums the COUNT
// replies. Workers scan their range with a local engine, so preprocessing
// happens once per node.

namespace multiscan {

struct ClusterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NodeReport {
    std::uint32_t rank = 0;
    std::string endpoint;
    std::uint64_t start = 0;
    std::uint64_t stop = 0;
    std::uint64_t count = 0;
    double load_seconds = 0;
    double preprocess_seconds = 0;
    double search_seconds = 0;
    double reduce_seconds = 0;
};

struct ClusterResult {
    MatchCount total = 0;
    std::vector<NodeReport> nodes;
};

/// Global description of one distributed job. With a shared path every
/// worker opens the same file and reads only its byte range; without one
/// the coordinator ships each worker its slice of `text` inline.
struct ClusterJob {
    Algorithm algorithm = Algorithm::aho_corasick;
    std::vector<std::string> patterns;
    WmParams wm_params;
    std::uint32_t local_workers = 1;
    std::optional<std::string> shared_path;  // set: path mode
    std::string_view text;                   // inline mode: full text
    std::uint64_t text_length = 0;           // n (file size in path mode)
};

/// Runs the job across the given "host:port" endpoints, one rank per
/// endpoint. Fails (throws ClusterError naming the node) if any worker is
/// unreachable, violates the protocol, or reports an error — partial
/// totals are never returned.
ClusterResult coordinate(const std::vector<std::string>& endpoints,
                         const ClusterJob& job);

/// A worker process endpoint: accepts connections and serves HELLO /
/// ASSIGN / BYE sequences until stopped. Each connection is handled on
/// its own thread with its own engine; one assignment at a time per
/// connection.
class WorkerServer {
  public:
    /// Binds and listens on "host:port" (port 0 picks an ephemeral port).
    /// Throws std::runtime_error if the address cannot be bound.
    explicit WorkerServer(const std::string& listen_address);
    ~WorkerServer();

    WorkerServer(const WorkerServer&) = delete;
    WorkerServer& operator=(const WorkerServer&) = delete;

    std::uint16_t port() const;
    std::string address() const;

    /// Serves on the calling thread until stop() is invoked elsewhere.
    void run();
    /// Serves on a background thread.
    void start();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws std::invalid_argument on malformed input.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace multiscan
