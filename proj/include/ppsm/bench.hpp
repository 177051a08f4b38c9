#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ppsm/oracle.hpp"

namespace ppsm {

struct CorrelationSummary {
    double pearson = 0;
    struct PerEdit {
        std::uint64_t edits;
        double mean_hamming;
        double variance;
    };
    std::vector<PerEdit> per_edit;
    std::vector<TrialRecord> trials;
};

double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Levenshtein-vs-Bloom-Hamming correlation experiment, plaintext pipeline
// only. Writes `edits,levenshtein,bloom_hamming,matched,seed` CSV rows.
CorrelationSummary bench_correlation(std::string_view base, const GramDictionary& dict,
                                     const ProtocolParams& params,
                                     const std::vector<std::uint64_t>& edit_grid,
                                     std::uint64_t trials_per_edit, const EditMix& mix,
                                     std::uint64_t seed, std::ostream* csv = nullptr);

struct ProtocolBenchRow {
    std::uint64_t sequence_length;
    std::uint64_t filter_bits;          // l
    std::uint64_t c2s_ciphertexts;
    std::uint64_t s2c_ciphertexts;
    std::uint64_t c2s_bytes;
    std::uint64_t s2c_bytes;
    double client_ms;
    double server_ms;
    bool matched;
};

// End-to-end in-process runs over a length grid; used both by the CLI
// bench-proto command and the bandwidth-shape acceptance check.
std::vector<ProtocolBenchRow> bench_protocol(const std::vector<std::uint64_t>& lengths,
                                             std::uint32_t e_max, double p,
                                             const GramConfig& cfg, unsigned security_bits,
                                             std::uint64_t seed);

}  // namespace ppsm
