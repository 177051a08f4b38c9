#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppsm/bytes.hpp"
#include "ppsm/hash.hpp"

namespace ppsm {

inline constexpr char kGramSeparator = '|';

struct GramConfig {
    std::uint8_t q_min = 2;
    std::uint8_t q_max = 40;
    bool positional = true;
    char pad_head = '#';
    char pad_tail = '$';

    void validate() const;
    bool operator==(const GramConfig&) const = default;
};

// Input string extended with q_min-1 pad symbols on each side, so that the
// fallback q_min-gram exists at every window start.
std::string extend(std::string_view s, const GramConfig& cfg);

// Positional encoding: decimal 1-based position, '|', gram bytes. Without
// positions the gram bytes alone.
std::string encode_gram(std::uint64_t position, std::string_view gram, bool positional);

struct GramSet {
    std::set<std::string> elements;
    std::uint64_t n_v = 0;  // |elements|
};

// Corpus-trained trie of grams with lengths in [q_min, q_max], prefix-closed
// above q_min. Immutable once built; shared read-only across sessions.
class GramDictionary {
public:
    static GramDictionary build(std::span<const std::string> corpus,
                                const GramConfig& cfg,
                                std::uint64_t prune_threshold);

    const GramConfig& config() const { return cfg_; }
    const Digest256& corpus_digest() const { return corpus_digest_; }
    std::uint16_t version() const { return version_; }

    bool contains(std::string_view gram) const;
    std::uint64_t count(std::string_view gram) const;
    std::uint64_t size() const;  // number of stored grams

    // Length of the longest stored gram starting at `pos` in `extended`,
    // or 0 when none matches.
    std::size_t longest_match(std::string_view extended, std::size_t pos) const;

    // (gram, count) pairs sorted lexicographically by gram bytes.
    std::vector<std::pair<std::string, std::uint64_t>> entries() const;

    Bytes serialize() const;                       // "PPGD" format
    static GramDictionary deserialize(std::span<const std::uint8_t> data);

    // Content digest of the serialized dictionary; what ProtocolParams pins.
    Digest256 digest() const;

private:
    struct Node {
        std::uint64_t count = 0;
        std::map<std::uint8_t, std::unique_ptr<Node>> next;
    };

    GramDictionary() = default;
    const Node* walk(std::string_view gram) const;
    void insert_entry(std::string_view gram, std::uint64_t count);
    void prune(Node& node, std::size_t depth, std::uint64_t threshold);

    GramConfig cfg_;
    Digest256 corpus_digest_{};
    std::uint16_t version_ = 1;
    std::unique_ptr<Node> root_ = std::make_unique<Node>();
};

// Greedy longest-match segmentation over the extended string.
GramSet segment(std::string_view s, const GramDictionary& dict);

// Conservative bound on the number of grams e edit operations can change:
// e * (2*q_max - 1). The string argument is unused by this bound but kept so
// a per-string provider can slot in.
std::uint64_t nag(std::string_view s_or_unused, std::uint64_t e, const GramDictionary& dict);
std::uint64_t nag_bound(std::uint64_t e, std::uint8_t q_max);

}  // namespace ppsm
