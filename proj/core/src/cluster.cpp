#include "multiscan/cluster.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

#include "multiscan/engine.hpp"
#include "multiscan/partition.hpp"

namespace multiscan {

namespace {

// Frames larger than this are treated as protocol corruption rather than
// honest payloads.
constexpr std::uint64_t kMaxPayloadBytes = std::uint64_t{1} << 33;  // 8 GiB

class Socket {
  public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket() { close_fd(); }

    Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            close_fd();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    void send_all(const std::uint8_t* data, std::size_t size) const {
        std::size_t sent = 0;
        while (sent < size) {
            const ssize_t n = ::send(fd_, data + sent, size - sent, MSG_NOSIGNAL);
            if (n <= 0) {
                throw std::runtime_error("send failed: " +
                                         std::string(std::strerror(errno)));
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    /// Reads exactly `size` bytes; returns false on a clean EOF at offset 0.
    bool recv_exact(std::uint8_t* data, std::size_t size) const {
        std::size_t received = 0;
        while (received < size) {
            const ssize_t n = ::recv(fd_, data + received, size - received, 0);
            if (n == 0) {
                if (received == 0) return false;
                throw std::runtime_error("connection closed mid-message");
            }
            if (n < 0) {
                throw std::runtime_error("recv failed: " +
                                         std::string(std::strerror(errno)));
            }
            received += static_cast<std::size_t>(n);
        }
        return true;
    }

    void shutdown_both() const {
        if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
    }

  private:
    void close_fd() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    int fd_ = -1;
};

Socket connect_to(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &results) != 0) {
        throw std::runtime_error("cannot resolve host '" + host + "'");
    }
    Socket socket;
    for (addrinfo* it = results; it != nullptr; it = it->ai_next) {
        const int fd = ::socket(it->ai_family, it->ai_socktype, it->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, it->ai_addr, it->ai_addrlen) == 0) {
            socket = Socket(fd);
            break;
        }
        ::close(fd);
    }
    ::freeaddrinfo(results);
    if (!socket.valid()) {
        throw std::runtime_error("cannot connect to " + host + ":" + service);
    }
    const int one = 1;
    ::setsockopt(socket.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return socket;
}

void write_message(const Socket& socket, const WireMessage& message) {
    const std::vector<std::uint8_t> frame = encode_message(message);
    socket.send_all(frame.data(), frame.size());
}

/// Reads one frame; returns nullopt on a clean EOF between messages.
std::optional<WireMessage> read_message(const Socket& socket) {
    std::array<std::uint8_t, kFrameHeaderSize> header;
    if (!socket.recv_exact(header.data(), header.size())) {
        return std::nullopt;
    }
    if (!std::equal(kWireMagic.begin(), kWireMagic.end(), header.begin())) {
        throw ProtocolError("bad magic");
    }
    const std::uint8_t type = header[4];
    if (type < 1 || type > 5) {
        throw ProtocolError("unknown message type " + std::to_string(type));
    }
    std::uint64_t length = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        length |= static_cast<std::uint64_t>(header[5 + i]) << (8 * i);
    }
    if (length > kMaxPayloadBytes) {
        throw ProtocolError("payload length exceeds the protocol limit");
    }
    WireMessage message;
    message.type = static_cast<MessageType>(type);
    message.payload.resize(length);
    if (length > 0 && !socket.recv_exact(message.payload.data(), length)) {
        throw std::runtime_error("connection closed mid-message");
    }
    return message;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

/// Loads the worker's byte range from its assignment source.
std::string load_assignment_bytes(const AssignPayload& assign, double& load_seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    if (assign.source == AssignSource::shared_path) {
        std::ifstream in(assign.shared_path, std::ios::binary);
        if (!in) {
            throw std::runtime_error("cannot open shared input '" +
                                     assign.shared_path + "'");
        }
        in.seekg(0, std::ios::end);
        const auto file_size = static_cast<std::uint64_t>(in.tellg());
        if (assign.stop > file_size) {
            throw std::runtime_error("assigned range ends at " +
                                     std::to_string(assign.stop) +
                                     " but the file has only " +
                                     std::to_string(file_size) + " bytes");
        }
        bytes.resize(assign.stop - assign.start);
        in.seekg(static_cast<std::streamoff>(assign.start));
        in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!in) {
            throw std::runtime_error("short read from '" + assign.shared_path + "'");
        }
    } else {
        if (assign.chunk.size() != assign.stop - assign.start) {
            throw std::runtime_error("inline chunk length does not match the range");
        }
        bytes.assign(assign.chunk.begin(), assign.chunk.end());
    }
    load_seconds = seconds_since(t0);
    return bytes;
}

CountPayload execute_assignment(const AssignPayload& assign) {
    if (assign.stop < assign.start) {
        throw std::runtime_error("assigned range is reversed");
    }
    CountPayload reply;
    const std::string bytes = load_assignment_bytes(assign, reply.load_seconds);

    auto t0 = std::chrono::steady_clock::now();
    const PatternSet patterns = PatternSet::from_patterns(assign.patterns);
    const auto matcher = make_matcher(assign.algorithm, patterns, assign.wm_params);
    reply.preprocess_seconds = seconds_since(t0);

    // The slice already carries the coordinator-added overlap, so counting
    // every match inside it equals counting matches that start in this
    // node's base range.
    t0 = std::chrono::steady_clock::now();
    Engine engine(assign.local_workers == 0 ? 1 : assign.local_workers);
    const CountVector per_worker = engine.scan(*matcher, bytes);
    reply.search_seconds = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    reply.count = reduce(per_worker);
    reply.reduce_seconds = seconds_since(t0);
    return reply;
}

}  // namespace

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const std::size_t colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
        throw std::invalid_argument("endpoint must look like host:port, got '" +
                                    endpoint + "'");
    }
    const std::string host = endpoint.substr(0, colon);
    const std::string port_text = endpoint.substr(colon + 1);
    unsigned long port = 0;
    try {
        port = std::stoul(port_text);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad port in endpoint '" + endpoint + "'");
    }
    if (port > 65535) {
        throw std::invalid_argument("port out of range in '" + endpoint + "'");
    }
    return {host, static_cast<std::uint16_t>(port)};
}

// --- coordinator ---

ClusterResult coordinate(const std::vector<std::string>& endpoints,
                         const ClusterJob& job) {
    if (endpoints.empty()) {
        throw ClusterError("no worker endpoints given");
    }
    if (job.patterns.empty()) {
        throw ClusterError("job has no patterns");
    }
    if (!job.shared_path.has_value() && job.text.size() != job.text_length) {
        throw ClusterError("inline job text does not match the declared length");
    }
    const PatternSet patterns = PatternSet::from_patterns(job.patterns);
    const auto worker_count = static_cast<std::uint32_t>(endpoints.size());
    const std::uint64_t n = job.text_length;
    const std::uint64_t m = patterns.length();

    std::vector<NodeReport> reports(worker_count);
    std::vector<std::string> failures(worker_count);
    std::vector<std::thread> threads;
    threads.reserve(worker_count);

    for (std::uint32_t rank = 0; rank < worker_count; ++rank) {
        threads.emplace_back([&, rank] {
            NodeReport& report = reports[rank];
            report.rank = rank;
            report.endpoint = endpoints[rank];
            try {
                const auto [start, stop] = chunk_bounds(rank, worker_count, n, m);
                report.start = start;
                report.stop = stop;

                const auto [host, port] = parse_endpoint(endpoints[rank]);
                const Socket socket = connect_to(host, port);

                write_message(socket, make_hello());
                const auto hello_reply = read_message(socket);
                if (!hello_reply) throw ProtocolError("worker closed during handshake");
                const HelloPayload hello = parse_hello(*hello_reply);
                if (hello.version != kProtocolVersion) {
                    throw ProtocolError("protocol version mismatch");
                }

                AssignPayload assign;
                assign.algorithm = job.algorithm;
                assign.start = start;
                assign.stop = stop;
                assign.patterns = job.patterns;
                assign.wm_params = job.wm_params;
                assign.local_workers = job.local_workers;
                if (job.shared_path.has_value()) {
                    assign.source = AssignSource::shared_path;
                    assign.shared_path = *job.shared_path;
                    assign.text_length = n;
                } else {
                    assign.source = AssignSource::inline_bytes;
                    const auto* data =
                        reinterpret_cast<const std::uint8_t*>(job.text.data());
                    assign.chunk.assign(data + start, data + stop);
                }
                write_message(socket, make_assign(assign));

                const auto reply = read_message(socket);
                if (!reply) throw ProtocolError("worker closed before replying");
                if (reply->type == MessageType::error) {
                    throw std::runtime_error("worker error: " + parse_error(*reply));
                }
                const CountPayload count = parse_count(*reply);
                report.count = count.count;
                report.load_seconds = count.load_seconds;
                report.preprocess_seconds = count.preprocess_seconds;
                report.search_seconds = count.search_seconds;
                report.reduce_seconds = count.reduce_seconds;

                write_message(socket, make_bye());
            } catch (const std::exception& e) {
                failures[rank] = e.what();
            }
        });
    }
    for (std::thread& t : threads) t.join();

    for (std::uint32_t rank = 0; rank < worker_count; ++rank) {
        if (!failures[rank].empty()) {
            throw ClusterError("node " + std::to_string(rank) + " (" +
                               endpoints[rank] + ") failed: " + failures[rank]);
        }
    }

    ClusterResult result;
    result.nodes = std::move(reports);
    for (const NodeReport& report : result.nodes) {
        result.total += report.count;
    }
    return result;
}

// --- worker ---

struct WorkerServer::Impl {
    Socket listener;
    std::string host;
    std::uint16_t bound_port = 0;
    std::atomic<bool> stopping{false};
    std::thread accept_thread;
    std::mutex connections_mutex;
    std::vector<std::thread> connection_threads;
    std::unordered_set<int> live_fds;  // guarded by connections_mutex

    void serve_connection(const Socket& socket) {
        for (;;) {
            std::optional<WireMessage> message;
            try {
                message = read_message(socket);
            } catch (const std::exception&) {
                return;  // drop the connection; other jobs are unaffected
            }
            if (!message) return;  // clean EOF

            try {
                switch (message->type) {
                    case MessageType::hello:
                        parse_hello(*message);
                        write_message(socket, make_hello());
                        break;
                    case MessageType::assign: {
                        const AssignPayload assign = parse_assign(*message);
                        write_message(socket, make_count(execute_assignment(assign)));
                        break;
                    }
                    case MessageType::bye:
                        return;
                    default:
                        write_message(socket,
                                      make_error("unexpected message type"));
                        return;
                }
            } catch (const std::exception& e) {
                try {
                    write_message(socket, make_error(e.what()));
                } catch (const std::exception&) {
                    return;
                }
            }
        }
    }

    void serve_fd(int fd) {
        {
            const Socket socket(fd);
            serve_connection(socket);
            {
                // Unregister before the descriptor closes so stop() never
                // touches a recycled fd.
                std::lock_guard lock(connections_mutex);
                live_fds.erase(fd);
            }
        }
    }

    void accept_loop() {
        for (;;) {
            sockaddr_storage addr{};
            socklen_t addr_len = sizeof(addr);
            const int fd = ::accept(listener.fd(),
                                    reinterpret_cast<sockaddr*>(&addr), &addr_len);
            if (fd < 0) {
                if (stopping.load()) return;
                if (errno == EINTR || errno == ECONNABORTED) continue;
                return;  // listener broken
            }
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            std::lock_guard lock(connections_mutex);
            live_fds.insert(fd);
            connection_threads.emplace_back([this, fd] { serve_fd(fd); });
        }
    }
};

WorkerServer::WorkerServer(const std::string& listen_address)
    : impl_(std::make_unique<Impl>()) {
    const auto [host, port] = parse_endpoint(listen_address);
    impl_->host = host;

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* results = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &results) != 0) {
        throw std::runtime_error("cannot resolve listen address '" + host + "'");
    }
    for (addrinfo* it = results; it != nullptr; it = it->ai_next) {
        const int fd = ::socket(it->ai_family, it->ai_socktype, it->ai_protocol);
        if (fd < 0) continue;
        const int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd, it->ai_addr, it->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
            impl_->listener = Socket(fd);
            break;
        }
        ::close(fd);
    }
    ::freeaddrinfo(results);
    if (!impl_->listener.valid()) {
        throw std::runtime_error("cannot bind " + listen_address);
    }

    sockaddr_storage bound{};
    socklen_t bound_len = sizeof(bound);
    ::getsockname(impl_->listener.fd(), reinterpret_cast<sockaddr*>(&bound),
                  &bound_len);
    if (bound.ss_family == AF_INET) {
        impl_->bound_port =
            ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
    } else {
        impl_->bound_port =
            ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
    }
}

WorkerServer::~WorkerServer() { stop(); }

std::uint16_t WorkerServer::port() const { return impl_->bound_port; }

std::string WorkerServer::address() const {
    return impl_->host + ":" + std::to_string(impl_->bound_port);
}

void WorkerServer::run() { impl_->accept_loop(); }

void WorkerServer::start() {
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

void WorkerServer::stop() {
    if (impl_->stopping.exchange(true)) return;
    impl_->listener.shutdown_both();
    if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
    std::vector<std::thread> connections;
    {
        std::lock_guard lock(impl_->connections_mutex);
        for (const int fd : impl_->live_fds) ::shutdown(fd, SHUT_RDWR);
        connections.swap(impl_->connection_threads);
    }
    for (std::thread& t : connections) t.join();
}

}  // namespace multiscan
