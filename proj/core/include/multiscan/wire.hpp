#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multiscan/core.hpp"
#include "multiscan/wu_manber.hpp"

// Binary wire protocol between the coordinator and worker processes.
//
// Frame layout (all integers little-endian):
//   4 bytes   magic "MSCN"
//   1 byte    message type (HELLO=1, ASSIGN=2, COUNT=3, ERROR=4, BYE=5)
//   8 bytes   payload length
//   N bytes   payload
//
// Payloads:
//   HELLO   u32 protocol version (currently 1)
//   ASSIGN  u8 algorithm (1=ac, 2=wm); u8 source (1=shared path, 2=inline);
//           u64 start; u64 stop; u64 pattern count d; u64 pattern length m;
//           d*m pattern bytes; if wm: u32 suffix_block, u32 prefix_block,
//           u32 bitshift; u32 local worker count; then for a shared path:
//           u64 path length, path bytes (UTF-8), u64 total text length; for
//           inline: u64 chunk length, chunk bytes (the [start, stop) slice).
//   COUNT   u64 match count; f64 load/preprocess/search/reduce seconds
//           (IEEE-754 bit patterns, little-endian)
//   ERROR   u64 message length, UTF-8 message
//   BYE     empty

namespace multiscan {

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MessageType : std::uint8_t {
    hello = 1,
    assign = 2,
    count = 3,
    error = 4,
    bye = 5,
};

inline constexpr std::array<std::uint8_t, 4> kWireMagic = {'M', 'S', 'C', 'N'};
inline constexpr std::uint32_t kProtocolVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 13;

struct WireMessage {
    MessageType type = MessageType::hello;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

std::vector<std::uint8_t> encode_message(const WireMessage& message);

/// Decodes one complete frame; throws ProtocolError on bad magic, unknown
/// type, or a length mismatch.
WireMessage decode_message(std::span<const std::uint8_t> bytes);

/// Little-endian payload assembly.
class PayloadWriter {
  public:
    void u8(std::uint8_t value) { bytes_.push_back(value); }
    void u32(std::uint32_t value);
    void u64(std::uint64_t value);
    void f64(double value);
    void string(std::string_view value);  // u64 length prefix + bytes
    void raw(std::span<const std::uint8_t> data);

    std::vector<std::uint8_t> take() { return std::move(bytes_); }

  private:
    std::vector<std::uint8_t> bytes_;
};

/// Matching reader; every accessor throws ProtocolError on underrun.
class PayloadReader {
  public:
    explicit PayloadReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    std::string string();
    std::vector<std::uint8_t> raw(std::size_t count);

    bool exhausted() const { return offset_ == bytes_.size(); }
    std::size_t remaining() const { return bytes_.size() - offset_; }

  private:
    void need(std::size_t count) const;

    std::span<const std::uint8_t> bytes_;
    std::size_t offset_ = 0;
};

// --- typed payloads ---

struct HelloPayload {
    std::uint32_t version = kProtocolVersion;
};

enum class AssignSource : std::uint8_t { shared_path = 1, inline_bytes = 2 };

struct AssignPayload {
    Algorithm algorithm = Algorithm::aho_corasick;
    AssignSource source = AssignSource::shared_path;
    std::uint64_t start = 0;  // global byte offset, overlap included in stop
    std::uint64_t stop = 0;
    std::vector<std::string> patterns;
    WmParams wm_params;  // meaningful only for wu_manber
    std::uint32_t local_workers = 1;
    std::string shared_path;        // shared_path source
    std::uint64_t text_length = 0;  // shared_path source: total n
    std::vector<std::uint8_t> chunk;  // inline source: the [start, stop) slice
};

struct CountPayload {
    std::uint64_t count = 0;
    double load_seconds = 0;
    double preprocess_seconds = 0;
    double search_seconds = 0;
    double reduce_seconds = 0;
};

WireMessage make_hello(const HelloPayload& hello = {});
WireMessage make_assign(const AssignPayload& assign);
WireMessage make_count(const CountPayload& count);
WireMessage make_error(std::string_view message);
WireMessage make_bye();

HelloPayload parse_hello(const WireMessage& message);
AssignPayload parse_assign(const WireMessage& message);
CountPayload parse_count(const WireMessage& message);
std::string parse_error(const WireMessage& message);

}  // namespace multiscan
