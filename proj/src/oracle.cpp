#include "ppsm/oracle.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "ppsm/errors.hpp"

namespace ppsm {

std::uint64_t levenshtein(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::uint64_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::uint64_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::uint64_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
        }
    }
    return row[b.size()];
}

double similarity(std::string_view a, std::string_view b) {
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 1.0;  // both empty
    return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

PlainMatch plaintext_match(std::string_view s1, std::string_view s2,
                           const GramDictionary& dict, const ProtocolParams& params) {
    BloomFilter b1 = filter_from_string(s1, dict, params.bloom);
    BloomFilter b2 = filter_from_string(s2, dict, params.bloom);
    std::uint64_t d = b1.distance(b2);
    return {d, d <= params.t_max};
}

std::string mutate(std::string_view s, std::uint64_t ops, const EditMix& mix,
                   std::uint64_t seed, std::string_view alphabet) {
    if (alphabet.empty()) throw DomainError("mutation alphabet is empty");
    double total = mix.substitute + mix.insert + mix.erase;
    if (total <= 0.0) throw DomainError("edit mix weights sum to zero");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> kind(0.0, total);
    std::string out(s);

    for (std::uint64_t i = 0; i < ops; ++i) {
        double pick = kind(rng);
        if (pick < mix.substitute) {
            if (out.empty()) throw DeletionFromEmpty("cannot substitute in an empty string");
            std::size_t pos = std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng);
            char current = out[pos];
            char replacement;
            do {
                replacement = alphabet[std::uniform_int_distribution<std::size_t>(
                    0, alphabet.size() - 1)(rng)];
            } while (replacement == current && alphabet.size() > 1);
            out[pos] = replacement;
        } else if (pick < mix.substitute + mix.insert) {
            std::size_t pos = std::uniform_int_distribution<std::size_t>(0, out.size())(rng);
            char c = alphabet[std::uniform_int_distribution<std::size_t>(
                0, alphabet.size() - 1)(rng)];
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), c);
        } else {
            if (out.empty()) throw DeletionFromEmpty("cannot delete from an empty string");
            std::size_t pos = std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng);
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
        }
    }
    return out;
}

}  // namespace ppsm
