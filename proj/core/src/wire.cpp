#include "multiscan/wire.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace multiscan {

namespace {

void append_le(std::vector<std::uint8_t>& out, std::uint64_t value,
               std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

std::uint64_t read_le(std::span<const std::uint8_t> bytes, std::size_t width) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < width; ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return value;
}

}  // namespace

void PayloadWriter::u32(std::uint32_t value) { append_le(bytes_, value, 4); }
void PayloadWriter::u64(std::uint64_t value) { append_le(bytes_, value, 8); }
void PayloadWriter::f64(double value) { u64(std::bit_cast<std::uint64_t>(value)); }

void PayloadWriter::string(std::string_view value) {
    u64(value.size());
    bytes_.insert(bytes_.end(), value.begin(), value.end());
}

void PayloadWriter::raw(std::span<const std::uint8_t> data) {
    bytes_.insert(bytes_.end(), data.begin(), data.end());
}

void PayloadReader::need(std::size_t count) const {
    if (remaining() < count) {
        throw ProtocolError("truncated payload");
    }
}

std::uint8_t PayloadReader::u8() {
    need(1);
    return bytes_[offset_++];
}

std::uint32_t PayloadReader::u32() {
    need(4);
    const auto value =
        static_cast<std::uint32_t>(read_le(bytes_.subspan(offset_), 4));
    offset_ += 4;
    return value;
}

std::uint64_t PayloadReader::u64() {
    need(8);
    const std::uint64_t value = read_le(bytes_.subspan(offset_), 8);
    offset_ += 8;
    return value;
}

double PayloadReader::f64() { return std::bit_cast<double>(u64()); }

std::string PayloadReader::string() {
    const std::uint64_t length = u64();
    need(length);
    std::string value(reinterpret_cast<const char*>(bytes_.data() + offset_),
                      length);
    offset_ += length;
    return value;
}

std::vector<std::uint8_t> PayloadReader::raw(std::size_t count) {
    need(count);
    std::vector<std::uint8_t> value(bytes_.begin() + offset_,
                                    bytes_.begin() + offset_ + count);
    offset_ += count;
    return value;
}

std::vector<std::uint8_t> encode_message(const WireMessage& message) {
    std::vector<std::uint8_t> frame(kFrameHeaderSize + message.payload.size());
    std::copy(kWireMagic.begin(), kWireMagic.end(), frame.begin());
    frame[4] = static_cast<std::uint8_t>(message.type);
    const std::uint64_t length = message.payload.size();
    for (std::size_t i = 0; i < 8; ++i) {
        frame[5 + i] = static_cast<std::uint8_t>(length >> (8 * i));
    }
    std::copy(message.payload.begin(), message.payload.end(),
              frame.begin() + kFrameHeaderSize);
    return frame;
}

WireMessage decode_message(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFrameHeaderSize) {
        throw ProtocolError("frame shorter than the fixed header");
    }
    if (!std::equal(kWireMagic.begin(), kWireMagic.end(), bytes.begin())) {
        throw ProtocolError("bad magic");
    }
    const std::uint8_t type = bytes[4];
    if (type < 1 || type > 5) {
        throw ProtocolError("unknown message type " + std::to_string(type));
    }
    const std::uint64_t length = read_le(bytes.subspan(5), 8);
    if (bytes.size() - kFrameHeaderSize != length) {
        throw ProtocolError("payload length mismatch");
    }
    WireMessage message;
    message.type = static_cast<MessageType>(type);
    message.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.end());
    return message;
}

WireMessage make_hello(const HelloPayload& hello) {
    PayloadWriter w;
    w.u32(hello.version);
    return {MessageType::hello, w.take()};
}

WireMessage make_assign(const AssignPayload& assign) {
    PayloadWriter w;
    w.u8(assign.algorithm == Algorithm::aho_corasick ? 1 : 2);
    w.u8(static_cast<std::uint8_t>(assign.source));
    w.u64(assign.start);
    w.u64(assign.stop);
    w.u64(assign.patterns.size());
    w.u64(assign.patterns.empty() ? 0 : assign.patterns.front().size());
    for (const std::string& p : assign.patterns) {
        w.raw({reinterpret_cast<const std::uint8_t*>(p.data()), p.size()});
    }
    if (assign.algorithm == Algorithm::wu_manber) {
        w.u32(assign.wm_params.suffix_block);
        w.u32(assign.wm_params.prefix_block);
        w.u32(assign.wm_params.bitshift);
    }
    w.u32(assign.local_workers);
    if (assign.source == AssignSource::shared_path) {
        w.string(assign.shared_path);
        w.u64(assign.text_length);
    } else {
        w.u64(assign.chunk.size());
        w.raw(assign.chunk);
    }
    return {MessageType::assign, w.take()};
}

WireMessage make_count(const CountPayload& count) {
    PayloadWriter w;
    w.u64(count.count);
    w.f64(count.load_seconds);
    w.f64(count.preprocess_seconds);
    w.f64(count.search_seconds);
    w.f64(count.reduce_seconds);
    return {MessageType::count, w.take()};
}

WireMessage make_error(std::string_view message) {
    PayloadWriter w;
    w.string(message);
    return {MessageType::error, w.take()};
}

WireMessage make_bye() { return {MessageType::bye, {}}; }

namespace {

void expect_type(const WireMessage& message, MessageType type, const char* name) {
    if (message.type != type) {
        throw ProtocolError(std::string("expected ") + name + " message");
    }
}

}  // namespace

HelloPayload parse_hello(const WireMessage& message) {
    expect_type(message, MessageType::hello, "HELLO");
    PayloadReader r(message.payload);
    HelloPayload hello;
    hello.version = r.u32();
    return hello;
}

AssignPayload parse_assign(const WireMessage& message) {
    expect_type(message, MessageType::assign, "ASSIGN");
    PayloadReader r(message.payload);
    AssignPayload assign;

    const std::uint8_t algorithm = r.u8();
    if (algorithm != 1 && algorithm != 2) {
        throw ProtocolError("unknown algorithm tag");
    }
    assign.algorithm =
        algorithm == 1 ? Algorithm::aho_corasick : Algorithm::wu_manber;

    const std::uint8_t source = r.u8();
    if (source != 1 && source != 2) {
        throw ProtocolError("unknown input source tag");
    }
    assign.source = static_cast<AssignSource>(source);

    assign.start = r.u64();
    assign.stop = r.u64();
    const std::uint64_t pattern_count = r.u64();
    const std::uint64_t pattern_length = r.u64();
    if (pattern_count == 0 || pattern_length == 0) {
        throw ProtocolError("assignment carries no patterns");
    }
    if (pattern_count > r.remaining() / pattern_length) {
        throw ProtocolError("truncated pattern block");
    }
    assign.patterns.reserve(pattern_count);
    for (std::uint64_t i = 0; i < pattern_count; ++i) {
        const auto bytes = r.raw(pattern_length);
        assign.patterns.emplace_back(bytes.begin(), bytes.end());
    }
    if (assign.algorithm == Algorithm::wu_manber) {
        assign.wm_params.suffix_block = r.u32();
        assign.wm_params.prefix_block = r.u32();
        assign.wm_params.bitshift = r.u32();
    }
    assign.local_workers = r.u32();
    if (assign.source == AssignSource::shared_path) {
        assign.shared_path = r.string();
        assign.text_length = r.u64();
    } else {
        const std::uint64_t chunk_length = r.u64();
        if (chunk_length > r.remaining()) {
            throw ProtocolError("truncated inline chunk");
        }
        assign.chunk = r.raw(chunk_length);
    }
    if (!r.exhausted()) {
        throw ProtocolError("trailing bytes after ASSIGN payload");
    }
    return assign;
}

CountPayload parse_count(const WireMessage& message) {
    expect_type(message, MessageType::count, "COUNT");
    PayloadReader r(message.payload);
    CountPayload count;
    count.count = r.u64();
    count.load_seconds = r.f64();
    count.preprocess_seconds = r.f64();
    count.search_seconds = r.f64();
    count.reduce_seconds = r.f64();
    return count;
}

std::string parse_error(const WireMessage& message) {
    expect_type(message, MessageType::error, "ERROR");
    PayloadReader r(message.payload);
    return r.string();
}

}  // namespace multiscan
