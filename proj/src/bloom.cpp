#include "ppsm/bloom.hpp"

#include <bit>
#include <cmath>

#include "ppsm/errors.hpp"
#include "ppsm/hash.hpp"

namespace ppsm {

namespace {
constexpr char kMagic[4] = {'P', 'P', 'B', 'F'};

std::span<const std::uint8_t> as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
}  // namespace

void BloomParams::validate() const {
    if (hash_count != 1) throw DomainError("hash_count is fixed to 1");
    if (length_bits < 1) throw DomainError("filter length must be >= 1");
    if (!(target_fp > 0.0 && target_fp < 1.0))
        throw DomainError("target false-positive rate must be in (0,1)");
    if (expected_elements < 1) throw DomainError("expected_elements must be >= 1");
    if (hash_name.empty()) throw DomainError("hash_name must be set");
}

std::uint64_t required_length_general(double p, std::uint64_t k, std::uint64_t n_v) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("false-positive rate must be in (0,1)");
    if (k < 1 || n_v < 1) throw DomainError("k and n_v must be >= 1");
    // l = -1 / ((1 - p^(1/k))^(1/(k*n_v)) - 1), evaluated via expm1/log for
    // stability at large n_v.
    double base = 1.0 - std::pow(p, 1.0 / static_cast<double>(k));
    double t = std::expm1(std::log(base) / (static_cast<double>(k) * static_cast<double>(n_v)));
    return static_cast<std::uint64_t>(std::ceil(-1.0 / t));
}

std::uint64_t required_length(double p, std::uint64_t n_v) {
    return required_length_general(p, 1, n_v);
}

double fp_probability(std::uint64_t l, std::uint64_t k, std::uint64_t n_v) {
    if (l < 1 || k < 1) throw DomainError("l and k must be >= 1");
    if (n_v == 0) return 0.0;
    double zero_prob = std::pow(1.0 - 1.0 / static_cast<double>(l),
                                static_cast<double>(k) * static_cast<double>(n_v));
    return std::pow(1.0 - zero_prob, static_cast<double>(k));
}

BloomFilter::BloomFilter(BloomParams params) : params_(std::move(params)) {
    params_.validate();
    bits_.assign((params_.length_bits + 7) / 8, 0);
}

std::uint64_t BloomFilter::index_of(std::span<const std::uint8_t> element) const {
    return sha1_mod(element, params_.length_bits);
}

void BloomFilter::set_bit(std::uint64_t index) {
    bits_[index / 8] |= static_cast<std::uint8_t>(1u << (index % 8));
}

bool BloomFilter::test_bit(std::uint64_t index) const {
    return (bits_[index / 8] >> (index % 8)) & 1u;
}

void BloomFilter::insert(std::span<const std::uint8_t> element) {
    set_bit(index_of(element));
}

void BloomFilter::insert(std::string_view element) { insert(as_bytes(element)); }

void BloomFilter::insert(const GramSet& grams) {
    for (const auto& g : grams.elements) insert(g);
}

bool BloomFilter::contains(std::span<const std::uint8_t> element) const {
    return test_bit(index_of(element));
}

bool BloomFilter::contains(std::string_view element) const { return contains(as_bytes(element)); }

std::uint64_t BloomFilter::cardinality() const {
    std::uint64_t n = 0;
    for (std::uint8_t b : bits_) n += std::popcount(b);
    return n;
}

void BloomFilter::require_same_params(const BloomFilter& other) const {
    if (params_.length_bits != other.params_.length_bits ||
        params_.hash_count != other.params_.hash_count ||
        params_.hash_name != other.params_.hash_name)
        throw ParamMismatch("bloom filter parameters differ");
}

BloomFilter BloomFilter::union_with(const BloomFilter& other) const {
    require_same_params(other);
    BloomFilter out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] |= other.bits_[i];
    return out;
}

BloomFilter BloomFilter::intersect(const BloomFilter& other) const {
    require_same_params(other);
    BloomFilter out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] &= other.bits_[i];
    return out;
}

std::uint64_t BloomFilter::distance(const BloomFilter& other) const {
    require_same_params(other);
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        d += std::popcount(static_cast<std::uint8_t>(bits_[i] ^ other.bits_[i]));
    return d;
}

Bytes BloomFilter::serialize() const {
    ByteWriter w;
    w.raw(std::string_view(kMagic, 4));
    w.u16(1);
    w.u64(params_.length_bits);
    w.u8(params_.hash_count);
    w.short_string(params_.hash_name);
    w.raw(bits_);
    return w.take();
}

BloomFilter BloomFilter::deserialize(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) !=
        std::string_view(kMagic, 4))
        throw ParseError("bad bloom filter magic");
    if (r.u16() != 1) throw ParseError("unsupported bloom filter version");
    BloomParams params;
    params.length_bits = r.u64();
    params.hash_count = r.u8();
    params.hash_name = r.short_string();
    BloomFilter f(params);
    auto payload = r.raw((params.length_bits + 7) / 8);
    f.bits_.assign(payload.begin(), payload.end());
    // Bits past l in the final byte are padding and must stay clear.
    if (params.length_bits % 8 != 0)
        f.bits_.back() &= static_cast<std::uint8_t>((1u << (params.length_bits % 8)) - 1);
    r.expect_end();
    return f;
}

BloomFilter filter_from_string(std::string_view s, const GramDictionary& dict,
                               const BloomParams& params) {
    BloomFilter f(params);
    f.insert(segment(s, dict));
    return f;
}

}  // namespace ppsm
