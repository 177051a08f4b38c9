#include "ppsm/wire.hpp"

#include <filesystem>
#include <fstream>

namespace ppsm {

namespace {
constexpr char kMagic[4] = {'P', 'P', 'S', 'M'};

void check_ciphertext_range(const mpz_class& value, const PublicKey& pk) {
    if (sgn(value) <= 0 || value >= pk.n_squared)
        throw ParseError("ciphertext outside the scheme modulus");
}
}  // namespace

Bytes encode_frame(MsgType type, std::span<const std::uint8_t> body) {
    ByteWriter w;
    w.raw(std::string_view(kMagic, 4));
    w.u16(kWireVersion);
    w.u8(static_cast<std::uint8_t>(type));
    w.u64(body.size());
    w.raw(body);
    return w.take();
}

void write_frame(Stream& stream, MsgType type, std::span<const std::uint8_t> body) {
    stream.write_all(encode_frame(type, body));
}

std::optional<WireFrame> read_frame(Stream& stream) {
    std::uint8_t header[4 + 2 + 1 + 8];
    std::uint8_t first;
    if (!stream.read_exact(&first, 1)) return std::nullopt;
    header[0] = first;
    if (!stream.read_exact(header + 1, sizeof(header) - 1))
        throw ParseError("stream ended inside the frame header");

    ByteReader r(std::span<const std::uint8_t>(header, sizeof(header)));
    auto magic = r.raw(4);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) !=
        std::string_view(kMagic, 4))
        throw ParseError("bad frame magic");
    if (r.u16() != kWireVersion) throw ParseError("unsupported wire version");
    std::uint8_t type = r.u8();
    if (type < 1 || type > 4) throw ParseError("unknown message type");
    std::uint64_t body_len = r.u64();
    if (body_len > kMaxBodyLen) throw ParseError("frame body too large");

    WireFrame frame;
    frame.type = static_cast<MsgType>(type);
    frame.body.resize(body_len);
    if (body_len > 0 && !stream.read_exact(frame.body.data(), body_len))
        throw ParseError("stream ended inside the frame body");
    return frame;
}

Bytes encode_query_body(const MatchQuery& query) {
    ByteWriter w;
    Bytes params = query.params.canonical_bytes();
    w.u32(static_cast<std::uint32_t>(params.size()));
    w.raw(params);
    w.raw(std::span<const std::uint8_t>(query.session_id.data(), query.session_id.size()));
    Bytes pk = query.pk->serialize();
    w.u32(static_cast<std::uint32_t>(pk.size()));
    w.raw(pk);
    w.u32(static_cast<std::uint32_t>(query.filter.cells.size()));
    for (const auto& c : query.filter.cells) w.bigint(c.value);
    w.bigint(query.filter.enc_cardinality.value);
    return w.take();
}

MatchQuery decode_query_body(std::span<const std::uint8_t> body) {
    ByteReader r(body);
    MatchQuery query;
    {
        std::uint32_t len = r.u32();
        Bytes params = r.raw(len);
        query.params = ProtocolParams::from_bytes(params);
    }
    {
        Bytes sid = r.raw(query.session_id.size());
        std::copy(sid.begin(), sid.end(), query.session_id.begin());
    }
    {
        std::uint32_t len = r.u32();
        Bytes pk = r.raw(len);
        query.pk = PublicKey::deserialize(pk);
    }
    std::uint32_t cells = r.u32();
    if (cells != query.params.bloom.length_bits)
        throw ParseError("cell count differs from the declared filter length");
    query.filter.cells.reserve(cells);
    for (std::uint32_t i = 0; i < cells; ++i) {
        mpz_class v = r.bigint();
        check_ciphertext_range(v, *query.pk);
        query.filter.cells.push_back({query.pk, std::move(v)});
    }
    mpz_class card = r.bigint();
    check_ciphertext_range(card, *query.pk);
    query.filter.enc_cardinality = {query.pk, std::move(card)};
    r.expect_end();
    return query;
}

Bytes encode_response_body(const MatchResponse& response) {
    ByteWriter w;
    w.raw(std::span<const std::uint8_t>(response.session_id.data(), response.session_id.size()));
    w.u32(static_cast<std::uint32_t>(response.masked.size()));
    for (const auto& c : response.masked) w.bigint(c.value);
    return w.take();
}

MatchResponse decode_response_body(std::span<const std::uint8_t> body,
                                   std::shared_ptr<const PublicKey> pk) {
    ByteReader r(body);
    MatchResponse response;
    Bytes sid = r.raw(response.session_id.size());
    std::copy(sid.begin(), sid.end(), response.session_id.begin());
    std::uint32_t n = r.u32();
    response.masked.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        mpz_class v = r.bigint();
        check_ciphertext_range(v, *pk);
        response.masked.push_back({pk, std::move(v)});
    }
    r.expect_end();
    return response;
}

Bytes encode_error_body(ErrorCode code, std::string_view message) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(code));
    w.short_string(message.substr(0, 255));
    return w.take();
}

std::pair<ErrorCode, std::string> decode_error_body(std::span<const std::uint8_t> body) {
    ByteReader r(body);
    auto code = static_cast<ErrorCode>(r.u8());
    std::string message = r.short_string();
    r.expect_end();
    return {code, std::move(message)};
}

void write_file(const std::string& path, std::span<const std::uint8_t> data, bool force) {
    if (!force && std::filesystem::exists(path))
        throw IoError(path + " exists; pass --force to overwrite");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write to " + path);
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

}  // namespace ppsm
