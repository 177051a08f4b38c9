#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ppsm/protocol.hpp"
#include "ppsm/stream.hpp"

namespace ppsm {

// Frame layout: magic "PPSM", version u16 BE, msg_type u8, body_len u64 BE,
// body bytes.
inline constexpr std::uint16_t kWireVersion = 1;
inline constexpr std::uint64_t kMaxBodyLen = 1ull << 30;

enum class MsgType : std::uint8_t {
    Hello = 1,
    Query = 2,
    Response = 3,
    Error = 4,
};

enum class ErrorCode : std::uint8_t {
    Internal = 1,
    ParamsMismatch = 2,
    Malformed = 3,
};

struct WireFrame {
    MsgType type;
    Bytes body;
};

Bytes encode_frame(MsgType type, std::span<const std::uint8_t> body);
void write_frame(Stream& stream, MsgType type, std::span<const std::uint8_t> body);

// nullopt on clean EOF before any frame byte; ParseError on anything else
// that is not a well-formed frame.
std::optional<WireFrame> read_frame(Stream& stream);

// Message bodies. HELLO carries the canonical ProtocolParams bytes verbatim.
Bytes encode_query_body(const MatchQuery& query);
MatchQuery decode_query_body(std::span<const std::uint8_t> body);

Bytes encode_response_body(const MatchResponse& response);
MatchResponse decode_response_body(std::span<const std::uint8_t> body,
                                   std::shared_ptr<const PublicKey> pk);

Bytes encode_error_body(ErrorCode code, std::string_view message);
std::pair<ErrorCode, std::string> decode_error_body(std::span<const std::uint8_t> body);

// File helpers. refuse-overwrite unless force.
void write_file(const std::string& path, std::span<const std::uint8_t> data, bool force);
Bytes read_file(const std::string& path);

}  // namespace ppsm
