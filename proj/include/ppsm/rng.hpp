#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ppsm {

// Randomness source for everything the protocol needs: masking factors,
// encryption randomness, session ids and the response shuffle. The library
// ships only the CSPRNG-backed implementation; deterministic sources exist
// in test code alone.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual void fill(std::uint8_t* out, std::size_t n) = 0;

    // Uniform in [0, bound), bound >= 1.
    std::uint64_t uniform(std::uint64_t bound);

    // Uniform in [0, bound), bound >= 1.
    mpz_class below(const mpz_class& bound);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }
};

// OpenSSL CSPRNG.
class SecureRandom final : public RandomSource {
public:
    void fill(std::uint8_t* out, std::size_t n) override;
};

SecureRandom& secure_random();

}  // namespace ppsm
