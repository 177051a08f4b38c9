#include "ppsm/bench.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "ppsm/client.hpp"
#include "ppsm/server.hpp"

namespace ppsm {

namespace {
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    // splitmix64 over the tuple
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::string random_sequence(std::uint64_t length, std::uint64_t seed,
                            std::string_view alphabet = "ACGT") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    s.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i) s.push_back(alphabet[pick(rng)]);
    return s;
}
}  // namespace

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw DomainError("pearson needs two equal-length samples");
    double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw DomainError("pearson undefined for constant sample");
    return sxy / std::sqrt(sxx * syy);
}

CorrelationSummary bench_correlation(std::string_view base, const GramDictionary& dict,
                                     const ProtocolParams& params,
                                     const std::vector<std::uint64_t>& edit_grid,
                                     std::uint64_t trials_per_edit, const EditMix& mix,
                                     std::uint64_t seed, std::ostream* csv) {
    CorrelationSummary summary;
    if (csv) *csv << "edits,levenshtein,bloom_hamming,matched,seed\n";

    BloomFilter base_filter = filter_from_string(base, dict, params.bloom);

    std::vector<double> xs, ys;
    for (std::uint64_t edits : edit_grid) {
        double sum = 0, sum_sq = 0;
        for (std::uint64_t t = 0; t < trials_per_edit; ++t) {
            std::uint64_t trial_seed = mix_seed(seed, edits, t);
            std::string mutated = mutate(base, edits, mix, trial_seed);

            TrialRecord rec;
            rec.edits_applied = edits;
            rec.edit_mix = mix;
            rec.levenshtein = levenshtein(base, mutated);
            BloomFilter mutated_filter = filter_from_string(mutated, dict, params.bloom);
            rec.bloom_hamming = base_filter.distance(mutated_filter);
            rec.matched = rec.bloom_hamming <= params.t_max;
            rec.seed = trial_seed;

            if (csv)
                *csv << rec.edits_applied << ',' << rec.levenshtein << ',' << rec.bloom_hamming
                     << ',' << (rec.matched ? 1 : 0) << ',' << rec.seed << '\n';
            xs.push_back(static_cast<double>(edits));
            ys.push_back(static_cast<double>(rec.bloom_hamming));
            sum += static_cast<double>(rec.bloom_hamming);
            sum_sq += static_cast<double>(rec.bloom_hamming) * static_cast<double>(rec.bloom_hamming);
            summary.trials.push_back(std::move(rec));
        }
        double n = static_cast<double>(trials_per_edit);
        double mean = sum / n;
        summary.per_edit.push_back({edits, mean, sum_sq / n - mean * mean});
    }
    summary.pearson = pearson(xs, ys);
    return summary;
}

std::vector<ProtocolBenchRow> bench_protocol(const std::vector<std::uint64_t>& lengths,
                                             std::uint32_t e_max, double p,
                                             const GramConfig& cfg, unsigned security_bits,
                                             std::uint64_t seed) {
    std::vector<ProtocolBenchRow> rows;
    KeyPair keys = keygen(security_bits);

    for (std::uint64_t length : lengths) {
        std::string client_seq = random_sequence(length, mix_seed(seed, length, 1));
        std::string server_seq = mutate(client_seq, e_max, kSubstitutionOnly,
                                        mix_seed(seed, length, 2));

        std::vector<std::string> corpus = {client_seq};
        auto dict = std::make_shared<const GramDictionary>(
            GramDictionary::build(corpus, cfg, 1));

        ProtocolParams params;
        params.gram_cfg = cfg;
        params.bloom.expected_elements = segment(client_seq, *dict).n_v;
        params.bloom.target_fp = p;
        params.bloom.length_bits = required_length(p, params.bloom.expected_elements);
        params.dict_digest = dict->digest();
        params.e_max = e_max;
        params.t_max = compute_threshold(e_max, p, *dict, client_seq);

        ServerContext ctx(server_seq, dict, params);

        ProtocolBenchRow row{};
        row.sequence_length = length;
        row.filter_bits = params.bloom.length_bits;

        auto t0 = Clock::now();
        auto [query, state] = client_prepare(client_seq, *dict, params, keys.pk, keys.sk);
        Bytes request = build_request_frames(query, params);
        row.client_ms = ms_since(t0);
        row.c2s_bytes = request.size();
        row.c2s_ciphertexts = query.filter.cells.size();

        t0 = Clock::now();
        MemoryStream server_stream(std::move(request));
        if (!handle_session(server_stream, ctx, secure_random()))
            throw ProtocolViolation("benchmark session failed");
        row.server_ms = ms_since(t0);
        Bytes response_bytes = server_stream.take_written();
        row.s2c_bytes = response_bytes.size();

        t0 = Clock::now();
        MemoryStream client_stream(std::move(response_bytes));
        auto frame = read_frame(client_stream);
        MatchResponse response = decode_response_body(frame->body, keys.pk);
        row.s2c_ciphertexts = response.masked.size();
        row.matched = client_verdict(response, state).matched;
        row.client_ms += ms_since(t0);

        rows.push_back(row);
    }
    return rows;
}

}  // namespace ppsm
