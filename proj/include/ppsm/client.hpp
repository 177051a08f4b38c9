#pragma once

#include <cstdint>
#include <string>

#include "ppsm/wire.hpp"

namespace ppsm {

struct QueryReport {
    bool matched = false;
    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_received = 0;
    double encrypt_ms = 0;
    double transfer_ms = 0;
    double decrypt_ms = 0;
};

// Builds the HELLO and QUERY frames for a session. Shared by the socket and
// the offline file paths, so both emit byte-identical frames.
Bytes build_request_frames(const MatchQuery& query, const ProtocolParams& params);

// Full client side over a stream: prepare, send, receive, decide.
QueryReport run_query(Stream& stream, std::string_view sequence, const GramDictionary& dict,
                      const ProtocolParams& params, std::shared_ptr<const PublicKey> pk,
                      const PrivateKey& sk, RandomSource& rng = secure_random());

// Offline mode: write request frames to a file / read response frames back.
void write_request_file(const std::string& path, const MatchQuery& query,
                        const ProtocolParams& params, bool force);
Verdict read_response_file(const std::string& path, const ClientState& state,
                           std::shared_ptr<const PublicKey> pk);

}  // namespace ppsm
