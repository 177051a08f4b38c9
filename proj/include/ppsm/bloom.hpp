#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppsm/bytes.hpp"
#include "ppsm/gram.hpp"

namespace ppsm {

inline constexpr std::string_view kDefaultHashName = "SHA1-mod-l";

struct BloomParams {
    std::uint64_t length_bits = 1;       // l
    std::uint8_t hash_count = 1;         // k, fixed to 1
    std::string hash_name = std::string(kDefaultHashName);
    double target_fp = 0.1;              // p
    std::uint64_t expected_elements = 1; // n_v

    void validate() const;
    bool operator==(const BloomParams&) const = default;
};

// l = ceil(-1 / ((1-p)^(1/n_v) - 1)); the k=1 sizing. Rounds up so the
// target false-positive rate is never exceeded.
std::uint64_t required_length(double p, std::uint64_t n_v);

// General-k form of the sizing equation; only k=1 is reachable through
// BloomParams but the closed form is kept for reference.
std::uint64_t required_length_general(double p, std::uint64_t k, std::uint64_t n_v);

// p = (1 - (1 - 1/l)^(k*n_v))^k
double fp_probability(std::uint64_t l, std::uint64_t k, std::uint64_t n_v);

// Single-hash Bloom filter. Bits are packed LSB-first within each byte.
class BloomFilter {
public:
    explicit BloomFilter(BloomParams params);

    const BloomParams& params() const { return params_; }
    std::uint64_t length() const { return params_.length_bits; }

    void insert(std::span<const std::uint8_t> element);
    void insert(std::string_view element);
    void insert(const GramSet& grams);
    bool contains(std::span<const std::uint8_t> element) const;
    bool contains(std::string_view element) const;

    bool test_bit(std::uint64_t index) const;
    void set_bit(std::uint64_t index);
    std::uint64_t index_of(std::span<const std::uint8_t> element) const;

    std::uint64_t cardinality() const;

    BloomFilter union_with(const BloomFilter& other) const;
    BloomFilter intersect(const BloomFilter& other) const;

    // |b1 OR b2| - |b1 AND b2|; equals the bit-vector Hamming distance.
    std::uint64_t distance(const BloomFilter& other) const;

    const Bytes& packed_bits() const { return bits_; }

    Bytes serialize() const;  // "PPBF" format
    static BloomFilter deserialize(std::span<const std::uint8_t> data);

    bool operator==(const BloomFilter&) const = default;

private:
    void require_same_params(const BloomFilter& other) const;

    BloomParams params_;
    Bytes bits_;
};

// Segment, then insert every encoded gram.
BloomFilter filter_from_string(std::string_view s, const GramDictionary& dict,
                               const BloomParams& params);

}  // namespace ppsm
