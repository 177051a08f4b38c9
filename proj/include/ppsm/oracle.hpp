#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ppsm/protocol.hpp"

namespace ppsm {

// Plaintext reference pipeline; no cryptography. The encrypted protocol must
// agree with plaintext_match exactly.

std::uint64_t levenshtein(std::string_view a, std::string_view b);

// 1 - d / max(|a|,|b|); both empty -> 1.
double similarity(std::string_view a, std::string_view b);

struct PlainMatch {
    std::uint64_t d = 0;
    bool matched = false;
};

PlainMatch plaintext_match(std::string_view s1, std::string_view s2,
                           const GramDictionary& dict, const ProtocolParams& params);

struct EditMix {
    double substitute = 1.0;
    double insert = 0.0;
    double erase = 0.0;
};

inline constexpr EditMix kSubstitutionOnly{1.0, 0.0, 0.0};
inline constexpr EditMix kMixedEdits{0.70, 0.15, 0.15};

// Applies exactly `ops` random edits, deterministically under the seed.
// Substitutions always pick a character different from the current one.
std::string mutate(std::string_view s, std::uint64_t ops, const EditMix& mix,
                   std::uint64_t seed, std::string_view alphabet = "ACGT");

struct TrialRecord {
    std::uint64_t edits_applied = 0;
    EditMix edit_mix;
    std::uint64_t levenshtein = 0;
    std::uint64_t bloom_hamming = 0;
    bool matched = false;
    std::uint64_t seed = 0;
};

}  // namespace ppsm
