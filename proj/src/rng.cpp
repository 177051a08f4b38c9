#include "ppsm/rng.hpp"

#include <openssl/rand.h>

#include <stdexcept>

namespace ppsm {

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform: zero bound");
    if (bound == 1) return 0;
    // Rejection sampling over the smallest covering power of two.
    std::uint64_t mask = ~0ull >> __builtin_clzll((bound - 1) | 1);
    for (;;) {
        std::uint64_t v;
        fill(reinterpret_cast<std::uint8_t*>(&v), sizeof(v));
        v &= mask;
        if (v < bound) return v;
    }
}

mpz_class RandomSource::below(const mpz_class& bound) {
    if (sgn(bound) <= 0) throw std::invalid_argument("below: nonpositive bound");
    std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    std::size_t nbytes = (bits + 7) / 8;
    unsigned top_bits = bits % 8 == 0 ? 8 : static_cast<unsigned>(bits % 8);
    std::vector<std::uint8_t> buf(nbytes);
    for (;;) {
        fill(buf.data(), buf.size());
        buf[0] &= static_cast<std::uint8_t>(0xff >> (8 - top_bits));
        mpz_class v;
        mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
        if (v < bound) return v;
    }
}

void SecureRandom::fill(std::uint8_t* out, std::size_t n) {
    if (RAND_bytes(out, static_cast<int>(n)) != 1)
        throw std::runtime_error("RAND_bytes failed");
}

SecureRandom& secure_random() {
    static SecureRandom rng;
    return rng;
}

}  // namespace ppsm
