#include "ppsm/protocol.hpp"

#include <cmath>

#include "ppsm/errors.hpp"

namespace ppsm {

namespace {
constexpr char kMagic[4] = {'P', 'P', 'P', 'R'};
}

Bytes ProtocolParams::canonical_bytes() const {
    ByteWriter w;
    w.raw(std::string_view(kMagic, 4));
    w.u16(1);
    w.u8(gram_cfg.q_min);
    w.u8(gram_cfg.q_max);
    w.u8(gram_cfg.positional ? 1 : 0);
    w.u8(static_cast<std::uint8_t>(gram_cfg.pad_head));
    w.u8(static_cast<std::uint8_t>(gram_cfg.pad_tail));
    w.u64(bloom.length_bits);
    w.u8(bloom.hash_count);
    w.short_string(bloom.hash_name);
    w.f64(bloom.target_fp);
    w.u64(bloom.expected_elements);
    w.raw(std::span<const std::uint8_t>(dict_digest.data(), dict_digest.size()));
    w.u32(e_max);
    w.u64(t_max);
    w.short_string(scheme_id);
    return w.take();
}

ProtocolParams ProtocolParams::from_bytes(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) !=
        std::string_view(kMagic, 4))
        throw ParseError("bad params magic");
    if (r.u16() != 1) throw ParseError("unsupported params version");
    ProtocolParams p;
    p.gram_cfg.q_min = r.u8();
    p.gram_cfg.q_max = r.u8();
    p.gram_cfg.positional = r.u8() != 0;
    p.gram_cfg.pad_head = static_cast<char>(r.u8());
    p.gram_cfg.pad_tail = static_cast<char>(r.u8());
    p.bloom.length_bits = r.u64();
    p.bloom.hash_count = r.u8();
    p.bloom.hash_name = r.short_string();
    p.bloom.target_fp = r.f64();
    p.bloom.expected_elements = r.u64();
    auto digest = r.raw(32);
    std::copy(digest.begin(), digest.end(), p.dict_digest.begin());
    p.e_max = r.u32();
    p.t_max = r.u64();
    p.scheme_id = r.short_string();
    r.expect_end();
    p.gram_cfg.validate();
    p.bloom.validate();
    return p;
}

Digest256 ProtocolParams::digest() const { return sha256(canonical_bytes()); }

std::uint64_t compute_threshold(std::uint32_t e_max, double p, const GramDictionary& dict,
                                std::string_view reference) {
    if (reference.empty()) throw EmptyInput("threshold reference string is empty");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("false-positive rate must be in (0,1)");
    std::uint64_t bound = nag(reference, e_max, dict);
    return static_cast<std::uint64_t>(
        std::floor(2.0 * static_cast<double>(bound) * (1.0 - p)));
}

std::pair<MatchQuery, ClientState> client_prepare(std::string_view s,
                                                  const GramDictionary& dict,
                                                  const ProtocolParams& params,
                                                  std::shared_ptr<const PublicKey> pk,
                                                  const PrivateKey& sk,
                                                  RandomSource& rng) {
    if (dict.digest() != params.dict_digest)
        throw DictionaryMismatch("dictionary digest differs from the agreed parameters");
    if (params.scheme_id != pk->scheme_id)
        throw SchemeMismatch("params and public key disagree on the scheme");

    BloomFilter filter = filter_from_string(s, dict, params.bloom);

    MatchQuery query;
    query.params = params;
    query.pk = pk;
    rng.fill(query.session_id.data(), query.session_id.size());

    query.filter.cells.reserve(filter.length());
    for (std::uint64_t i = 0; i < filter.length(); ++i)
        query.filter.cells.push_back(encrypt(pk, filter.test_bit(i) ? 1 : 0, rng));
    query.filter.enc_cardinality = encrypt(pk, mpz_class(filter.cardinality()), rng);

    ClientState state;
    state.sk = &sk;
    state.session_id = query.session_id;
    state.t_max = params.t_max;
    return {std::move(query), std::move(state)};
}

Ciphertext encrypted_intersection(const EncryptedFilter& filter, const BloomFilter& server_filter) {
    if (filter.cells.size() != server_filter.length())
        throw FilterLengthMismatch("encrypted filter length differs from server filter");
    // Identity: a deterministic encryption of zero, folded away by the sum.
    Ciphertext acc{filter.enc_cardinality.pk, mpz_class(1)};
    for (std::uint64_t i = 0; i < server_filter.length(); ++i)
        if (server_filter.test_bit(i)) acc = add(acc, filter.cells[i]);
    return acc;
}

Ciphertext encrypted_distance(const EncryptedFilter& filter, const BloomFilter& server_filter,
                              RandomSource& rng) {
    Ciphertext inter = encrypted_intersection(filter, server_filter);
    auto pk = filter.enc_cardinality.pk;
    Ciphertext enc_server_card = encrypt(pk, mpz_class(server_filter.cardinality()), rng);
    // |B_A| + |B_B| - 2*|B_A n B_B|
    return add(add(filter.enc_cardinality, enc_server_card), scalar_mul(inter, -2));
}

std::vector<Ciphertext> threshold_differences(const Ciphertext& enc_d, std::uint64_t t_max,
                                              std::shared_ptr<const PublicKey> pk,
                                              RandomSource& rng) {
    std::vector<Ciphertext> out;
    out.reserve(t_max + 1);
    const mpz_class& m = pk->plaintext_modulus();
    for (std::uint64_t t = 0; t <= t_max; ++t) {
        mpz_class inverse_threshold = (m - t) % m;  // t=0 maps to 0
        out.push_back(add(enc_d, encrypt(pk, inverse_threshold, rng)));
    }
    return out;
}

void mask_in_place(std::vector<Ciphertext>& diffs, RandomSource& rng) {
    for (auto& c : diffs) {
        const mpz_class& m = c.pk->plaintext_modulus();
        // r in [1, M-1]; zero would forge a match.
        mpz_class r = rng.below(m - 1) + 1;
        c = scalar_mul(c, r);
    }
}

MatchResponse server_eval(const MatchQuery& query, const BloomFilter& server_filter,
                          const GramDictionary& dict, RandomSource& rng) {
    if (dict.digest() != query.params.dict_digest)
        throw DictionaryMismatch("query was built against a different dictionary");
    if (!query.pk || query.pk->scheme_id != kPaillierSchemeId ||
        query.params.scheme_id != query.pk->scheme_id)
        throw SchemeMismatch("unsupported or inconsistent scheme");
    if (query.filter.cells.size() != query.params.bloom.length_bits ||
        server_filter.length() != query.params.bloom.length_bits)
        throw FilterLengthMismatch("filter length differs from the agreed parameters");

    Ciphertext enc_d = encrypted_distance(query.filter, server_filter, rng);
    std::vector<Ciphertext> masked = threshold_differences(enc_d, query.params.t_max,
                                                           query.pk, rng);
    mask_in_place(masked, rng);
    rng.shuffle(masked);

    MatchResponse response;
    response.session_id = query.session_id;
    response.masked = std::move(masked);
    return response;
}

MatchResponse server_eval(const MatchQuery& query, std::string_view server_string,
                          const GramDictionary& dict, RandomSource& rng) {
    BloomFilter server_filter = filter_from_string(server_string, dict, query.params.bloom);
    return server_eval(query, server_filter, dict, rng);
}

Verdict client_verdict(const MatchResponse& response, const ClientState& state) {
    if (response.session_id != state.session_id)
        throw SessionMismatch("response session id differs from the query");
    if (response.masked.size() != state.t_max + 1)
        throw ProtocolViolation("response does not contain exactly t_max+1 elements");
    if (state.sk == nullptr) throw SessionMismatch("client state lost its private key");

    std::uint64_t zeros = 0;
    for (const auto& c : response.masked) {
        if (decrypt(*state.sk, c) == 0) {
            ++zeros;
            if (!state.full_scan) break;
        }
    }
    if (zeros > 1)
        throw ProtocolViolation("more than one zero in the response");
    return Verdict{zeros == 1};
}

}  // namespace ppsm
