// Acceptance gate: nine end-to-end criteria, one pass/fail line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ppsm/bench.hpp"
#include "ppsm/client.hpp"
#include "ppsm/errors.hpp"
#include "ppsm/oracle.hpp"
#include "ppsm/server.hpp"
#include "test_util.hpp"

using namespace ppsm;
using ppsm::test::DeterministicRandom;
using ppsm::test::random_dna;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

GramDictionary train_dict(const std::vector<std::string>& corpus, std::uint8_t q_min,
                          std::uint8_t q_max, std::uint64_t threshold = 1) {
    GramConfig cfg;
    cfg.q_min = q_min;
    cfg.q_max = q_max;
    return GramDictionary::build(corpus, cfg, threshold);
}

ProtocolParams derive_params(const GramDictionary& dict, double p, std::uint32_t e_max,
                             std::string_view reference) {
    ProtocolParams params;
    params.gram_cfg = dict.config();
    params.bloom.target_fp = p;
    params.bloom.expected_elements = segment(reference, dict).n_v;
    params.bloom.length_bits = required_length(p, params.bloom.expected_elements);
    params.dict_digest = dict.digest();
    params.e_max = e_max;
    params.t_max = compute_threshold(e_max, p, dict, reference);
    return params;
}

// ---- criterion 1: filter sizing -------------------------------------------

Check criterion_sizing() {
    Check c;
    (void)required_length(0.1, 16569);  // warm up
    auto t0 = Clock::now();
    std::uint64_t l = required_length(0.1, 16569);
    double dt = ms_since(t0);
    c.require(l == 157261 || l == 157262, "length " + std::to_string(l));
    c.require(dt < 1.0, "took " + std::to_string(dt) + " ms");
    return c;
}

// ---- criterion 2: homomorphism suite --------------------------------------

Check criterion_homomorphism() {
    Check c;
    DeterministicRandom rng(201);
    KeyPair keys = keygen(2048, rng);
    const mpz_class& m = keys.pk->plaintext_modulus();

    for (int trial = 0; trial < 1000 && c.ok; ++trial) {
        mpz_class x = rng.below(m), y = rng.below(m);
        mpz_class z = mpz_class(rng.uniform((1ull << 33) + 1)) - mpz_class(1ul << 32);

        Ciphertext ex = encrypt(keys.pk, x, rng);
        Ciphertext ey = encrypt(keys.pk, y, rng);
        c.require(decrypt(keys.sk, add(ex, ey)) == (x + y) % m,
                  "add law failed at trial " + std::to_string(trial));

        mpz_class expected = x * z % m;
        if (sgn(expected) < 0) expected += m;
        c.require(decrypt(keys.sk, scalar_mul(ex, z)) == expected,
                  "scalar law failed at trial " + std::to_string(trial));
    }
    return c;
}

// ---- criterion 3: oracle equivalence --------------------------------------

Check criterion_oracle_equivalence() {
    Check c;
    DeterministicRandom rng(301);
    KeyPair keys = keygen(1024, rng);
    std::mt19937_64 gen(302);

    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        std::uint64_t length = 200 + gen() % 1801;
        std::uint64_t edits = gen() % 21;
        std::string a = random_dna(length, gen());
        std::string b = mutate(a, edits, kMixedEdits, gen());

        auto dict = std::make_shared<const GramDictionary>(train_dict({a}, 2, 4));
        ProtocolParams params = derive_params(*dict, 0.5, 20, a);

        PlainMatch plain = plaintext_match(a, b, *dict, params);

        auto [query, state] = client_prepare(a, *dict, params, keys.pk, keys.sk, rng);
        BloomFilter server_filter = filter_from_string(b, *dict, params.bloom);
        Ciphertext enc_d = encrypted_distance(query.filter, server_filter, rng);
        mpz_class d = decrypt(keys.sk, enc_d);
        c.require(d == plain.d, "trial " + std::to_string(trial) + ": encrypted d " +
                                    d.get_str() + " vs plaintext " + std::to_string(plain.d));

        MatchResponse response = server_eval(query, server_filter, *dict, rng);
        bool matched = client_verdict(response, state).matched;
        c.require(matched == plain.matched,
                  "trial " + std::to_string(trial) + ": verdict mismatch");
        c.require(plain.matched == (plain.d <= params.t_max),
                  "trial " + std::to_string(trial) + ": threshold rule broken");
    }
    return c;
}

// ---- criterion 4: exactly-one-zero law ------------------------------------

Check criterion_one_zero() {
    Check c;
    DeterministicRandom rng(401);
    KeyPair keys = keygen(1024, rng);
    const std::uint64_t t_max = 5;

    BloomParams bp;
    bp.length_bits = 32;
    BloomFilter a(bp);
    for (std::uint64_t i = 0; i < 8; ++i) a.set_bit(i * 3);

    EncryptedFilter enc;
    for (std::uint64_t i = 0; i < a.length(); ++i)
        enc.cells.push_back(encrypt(keys.pk, a.test_bit(i) ? 1 : 0, rng));
    enc.enc_cardinality = encrypt(keys.pk, mpz_class(a.cardinality()), rng);

    for (std::uint64_t d = 0; d <= 8; ++d) {
        BloomFilter b(bp);
        std::uint64_t dropped = 0;
        for (std::uint64_t i = 0; i < a.length(); ++i) {
            if (!a.test_bit(i)) continue;
            if (dropped < d) {
                ++dropped;
                continue;
            }
            b.set_bit(i);
        }
        c.require(a.distance(b) == d, "setup failed at d=" + std::to_string(d));

        Ciphertext enc_d = encrypted_distance(enc, b, rng);
        auto diffs = threshold_differences(enc_d, t_max, keys.pk, rng);
        mask_in_place(diffs, rng);
        rng.shuffle(diffs);

        std::uint64_t zeros = 0;
        for (const auto& ct : diffs)
            if (decrypt(keys.sk, ct) == 0) ++zeros;
        std::uint64_t expected = d <= t_max ? 1 : 0;
        c.require(zeros == expected, "d=" + std::to_string(d) + " gave " +
                                         std::to_string(zeros) + " zeros");
    }
    return c;
}

// ---- criterion 5: edit/hamming correlation --------------------------------

Check criterion_correlation() {
    Check c;
    std::string base = random_dna(2000, 501);
    GramDictionary dict = train_dict({base}, 2, 40);
    ProtocolParams params = derive_params(dict, 0.1, 50, base);

    std::vector<std::uint64_t> grid = {1};
    for (std::uint64_t e = 5; e <= 50; e += 5) grid.push_back(e);

    CorrelationSummary summary =
        bench_correlation(base, dict, params, grid, 20, kSubstitutionOnly, 502);
    c.require(summary.trials.size() >= 200,
              "only " + std::to_string(summary.trials.size()) + " trials");
    c.require(summary.pearson >= 0.95, "pearson " + std::to_string(summary.pearson));
    c.detail = "r=" + std::to_string(summary.pearson) + (c.ok ? "" : " " + c.detail);
    return c;
}

// ---- criterion 6: bandwidth shape -----------------------------------------

Check criterion_bandwidth() {
    Check c;
    const std::uint32_t e_max = 2;
    const double p = 0.5;
    GramConfig cfg;
    cfg.q_min = 2;
    cfg.q_max = 4;

    auto rows = bench_protocol({250, 500, 1000, 2000}, e_max, p, cfg, 1024, 601);

    std::uint64_t expected_s2c =
        static_cast<std::uint64_t>(std::floor(2.0 * nag_bound(e_max, cfg.q_max) * (1.0 - p))) + 1;
    double min_ratio = 1e300, max_ratio = 0;
    for (const auto& row : rows) {
        c.require(row.s2c_ciphertexts == expected_s2c,
                  "s2c count " + std::to_string(row.s2c_ciphertexts) + " at length " +
                      std::to_string(row.sequence_length));
        c.require(row.c2s_ciphertexts == row.filter_bits,
                  "c2s count != l at length " + std::to_string(row.sequence_length));
        double ratio = static_cast<double>(row.c2s_ciphertexts) /
                       static_cast<double>(row.sequence_length);
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
    }
    c.require(max_ratio / min_ratio <= 1.05,
              "c2s/length ratio spread " + std::to_string(max_ratio / min_ratio));
    return c;
}

// ---- criterion 7: identity law --------------------------------------------

Check criterion_identity() {
    Check c;
    DeterministicRandom rng(701);
    KeyPair keys = keygen(1024, rng);
    std::mt19937_64 gen(702);

    std::vector<std::string> corpus;
    for (int i = 0; i < 20; ++i) corpus.push_back(random_dna(200 + gen() % 201, gen()));
    auto dict = std::make_shared<const GramDictionary>(train_dict(corpus, 2, 4));

    for (const auto& s : corpus) {
        ProtocolParams params = derive_params(*dict, 0.5, 0, s);
        c.require(params.t_max == 0, "t_max nonzero at e_max=0");

        c.require(plaintext_match(s, s, *dict, params).d == 0, "plaintext d nonzero");

        auto [query, state] = client_prepare(s, *dict, params, keys.pk, keys.sk, rng);
        MatchResponse response = server_eval(query, s, *dict, rng);
        c.require(client_verdict(response, state).matched, "self-query did not match");
        if (!c.ok) break;
    }
    return c;
}

// ---- criterion 8: desk-scale end-to-end runtime ---------------------------

Check criterion_runtime() {
    Check c;
    GramConfig cfg;
    cfg.q_min = 2;
    cfg.q_max = 40;

    auto t0 = Clock::now();
    auto rows = bench_protocol({2000}, 10, 0.1, cfg, 2048, 801);
    double total_s = ms_since(t0) / 1000.0;

    c.require(rows.size() == 1 && rows[0].matched, "protocol run did not match");
    c.require(total_s <= 300.0, "took " + std::to_string(total_s) + " s");
    c.detail = std::to_string(total_s) + " s" + (c.ok ? "" : " " + c.detail);
    return c;
}

// ---- criterion 9: wire fuzzing --------------------------------------------

// Strict re-parse of a mutated request, mirroring the checks an honest
// server applies. Used to classify any accepted session as well-formed.
bool request_is_valid(const Bytes& request, const Bytes& params_bytes,
                      const ProtocolParams& params) {
    try {
        MemoryStream stream(request);
        auto hello = read_frame(stream);
        if (!hello || hello->type != MsgType::Hello) return false;
        if (hello->body != params_bytes) return false;
        auto query = read_frame(stream);
        if (!query || query->type != MsgType::Query) return false;
        MatchQuery decoded = decode_query_body(query->body);
        if (decoded.params != params) return false;
        if (decoded.filter.cells.size() != params.bloom.length_bits) return false;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

Check criterion_fuzzing() {
    Check c;
    DeterministicRandom rng(901);
    KeyPair keys = keygen(1024, rng);

    std::string sequence = "ACGTACGTACGT";
    auto dict = std::make_shared<const GramDictionary>(train_dict({sequence}, 2, 4));
    ProtocolParams params = derive_params(*dict, 0.5, 1, sequence);
    params.bloom.length_bits = 8;
    params.t_max = 2;
    Bytes params_bytes = params.canonical_bytes();

    ServerContext ctx(sequence, dict, params);
    auto [query, state] = client_prepare(sequence, *dict, params, keys.pk, keys.sk, rng);
    Bytes base = build_request_frames(query, params);

    std::mt19937_64 gen(902);
    std::uint64_t crashes = 0, accepted_malformed = 0, accepted = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Bytes mutated = base;
        if (gen() % 2 == 0) {
            mutated.resize(gen() % mutated.size());
        } else {
            std::uint64_t flips = 1 + gen() % 8;
            for (std::uint64_t f = 0; f < flips; ++f) {
                std::uint8_t mask = static_cast<std::uint8_t>(1 + gen() % 255);
                mutated[gen() % mutated.size()] ^= mask;
            }
        }

        bool ok;
        try {
            MemoryStream stream(mutated);
            ok = handle_session(stream, ctx, rng);
        } catch (...) {
            ++crashes;
            continue;
        }
        if (ok) {
            ++accepted;
            if (!request_is_valid(mutated, params_bytes, params)) ++accepted_malformed;
        }
    }
    c.require(crashes == 0, std::to_string(crashes) + " escaped exceptions");
    c.require(accepted_malformed == 0,
              std::to_string(accepted_malformed) + " malformed sessions accepted");
    c.detail = std::to_string(accepted) + " mutants still well-formed" +
               (c.ok ? "" : " " + c.detail);
    return c;
}

struct Criterion {
    int number;
    const char* name;
    Check (*run)();
};

const Criterion kCriteria[] = {
    {1, "filter sizing", criterion_sizing},
    {2, "homomorphism suite", criterion_homomorphism},
    {3, "oracle equivalence", criterion_oracle_equivalence},
    {4, "exactly-one-zero law", criterion_one_zero},
    {5, "edit/hamming correlation", criterion_correlation},
    {6, "bandwidth shape", criterion_bandwidth},
    {7, "identity law", criterion_identity},
    {8, "end-to-end runtime", criterion_runtime},
    {9, "wire fuzzing", criterion_fuzzing},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& criterion : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.number) == selected.end())
            continue;
        auto t0 = Clock::now();
        Check check = criterion.run();
        double secs = ms_since(t0) / 1000.0;
        std::printf("C%d %-26s %s (%.1f s)%s%s\n", criterion.number, criterion.name,
                    check.ok ? "PASS" : "FAIL", secs, check.detail.empty() ? "" : " ",
                    check.detail.c_str());
        std::fflush(stdout);
        if (!check.ok) ++failures;
    }
    return failures;
}
