#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppsm/bloom.hpp"
#include "ppsm/gram.hpp"
#include "ppsm/paillier.hpp"

namespace ppsm {

using SessionId = std::array<std::uint8_t, 16>;

struct ProtocolParams {
    BloomParams bloom;
    GramConfig gram_cfg;
    Digest256 dict_digest{};
    std::uint32_t e_max = 0;
    std::uint64_t t_max = 0;
    std::string scheme_id = std::string(kPaillierSchemeId);

    // Canonical serialization ("PPPR"); both the params file content and the
    // HELLO body. Sessions abort unless the digests agree bit-exactly.
    Bytes canonical_bytes() const;
    static ProtocolParams from_bytes(std::span<const std::uint8_t> data);
    Digest256 digest() const;

    bool operator==(const ProtocolParams&) const = default;
};

// t_max = floor(2 * NAG(reference, e_max) * (1 - p)). With the conservative
// NAG bound the reference string only feeds the signature.
std::uint64_t compute_threshold(std::uint32_t e_max, double p,
                                const GramDictionary& dict, std::string_view reference);

struct EncryptedFilter {
    std::vector<Ciphertext> cells;  // exactly l cells, cell i encrypts bit i
    Ciphertext enc_cardinality;
};

struct MatchQuery {
    ProtocolParams params;
    std::shared_ptr<const PublicKey> pk;
    EncryptedFilter filter;
    SessionId session_id{};
};

struct ClientState {
    const PrivateKey* sk = nullptr;
    SessionId session_id{};
    std::uint64_t t_max = 0;
    // Full scan audits for duplicate zeros; early exit stops at the first.
    bool full_scan = true;
};

struct MatchResponse {
    SessionId session_id{};
    std::vector<Ciphertext> masked;  // exactly t_max+1, shuffled
};

struct Verdict {
    bool matched = false;
};

std::pair<MatchQuery, ClientState> client_prepare(std::string_view s,
                                                  const GramDictionary& dict,
                                                  const ProtocolParams& params,
                                                  std::shared_ptr<const PublicKey> pk,
                                                  const PrivateKey& sk,
                                                  RandomSource& rng = secure_random());

// Server pipeline sub-steps, each testable in isolation. The server side
// never sees a PrivateKey.
Ciphertext encrypted_intersection(const EncryptedFilter& filter, const BloomFilter& server_filter);
Ciphertext encrypted_distance(const EncryptedFilter& filter, const BloomFilter& server_filter,
                              RandomSource& rng = secure_random());
std::vector<Ciphertext> threshold_differences(const Ciphertext& enc_d, std::uint64_t t_max,
                                              std::shared_ptr<const PublicKey> pk,
                                              RandomSource& rng = secure_random());
void mask_in_place(std::vector<Ciphertext>& diffs, RandomSource& rng = secure_random());

MatchResponse server_eval(const MatchQuery& query, std::string_view server_string,
                          const GramDictionary& dict, RandomSource& rng = secure_random());

// Same, with the server's Bloom filter prebuilt (one filter per served
// string, reused across sessions).
MatchResponse server_eval(const MatchQuery& query, const BloomFilter& server_filter,
                          const GramDictionary& dict, RandomSource& rng = secure_random());

Verdict client_verdict(const MatchResponse& response, const ClientState& state);

}  // namespace ppsm
