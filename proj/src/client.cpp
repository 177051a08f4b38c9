#include "ppsm/client.hpp"

#include <chrono>

namespace ppsm {

namespace {
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}
}  // namespace

Bytes build_request_frames(const MatchQuery& query, const ProtocolParams& params) {
    Bytes out = encode_frame(MsgType::Hello, params.canonical_bytes());
    Bytes query_frame = encode_frame(MsgType::Query, encode_query_body(query));
    out.insert(out.end(), query_frame.begin(), query_frame.end());
    return out;
}

QueryReport run_query(Stream& stream, std::string_view sequence, const GramDictionary& dict,
                      const ProtocolParams& params, std::shared_ptr<const PublicKey> pk,
                      const PrivateKey& sk, RandomSource& rng) {
    QueryReport report;

    auto t0 = Clock::now();
    auto [query, state] = client_prepare(sequence, dict, params, pk, sk, rng);
    report.encrypt_ms = ms_since(t0);

    t0 = Clock::now();
    Bytes request = build_request_frames(query, params);
    report.bytes_sent = request.size();
    stream.write_all(request);

    auto frame = read_frame(stream);
    if (!frame) throw ConnectionError("server closed the connection without responding");
    report.bytes_received = 4 + 2 + 1 + 8 + frame->body.size();
    report.transfer_ms = ms_since(t0);

    if (frame->type == MsgType::Error) {
        auto [code, message] = decode_error_body(frame->body);
        throw ProtocolViolation("server error " +
                                std::to_string(static_cast<int>(code)) + ": " + message);
    }
    if (frame->type != MsgType::Response)
        throw ProtocolViolation("unexpected frame type from server");

    t0 = Clock::now();
    MatchResponse response = decode_response_body(frame->body, pk);
    Verdict verdict = client_verdict(response, state);
    report.decrypt_ms = ms_since(t0);
    report.matched = verdict.matched;
    return report;
}

void write_request_file(const std::string& path, const MatchQuery& query,
                        const ProtocolParams& params, bool force) {
    write_file(path, build_request_frames(query, params), force);
}

Verdict read_response_file(const std::string& path, const ClientState& state,
                           std::shared_ptr<const PublicKey> pk) {
    MemoryStream stream(read_file(path));
    auto frame = read_frame(stream);
    if (!frame) throw ParseError("response file is empty");
    if (frame->type == MsgType::Error) {
        auto [code, message] = decode_error_body(frame->body);
        throw ProtocolViolation("server error " +
                                std::to_string(static_cast<int>(code)) + ": " + message);
    }
    if (frame->type != MsgType::Response)
        throw ProtocolViolation("unexpected frame type in response file");
    return client_verdict(decode_response_body(frame->body, std::move(pk)), state);
}

}  // namespace ppsm
