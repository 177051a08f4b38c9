#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include <gmpxx.h>

#include "ppsm/bytes.hpp"
#include "ppsm/rng.hpp"

namespace ppsm {

inline constexpr std::string_view kPaillierSchemeId = "paillier";

// Additively homomorphic public key. The plaintext space is Z_n; n doubles
// as the sampling domain for protocol masking randomness.
struct PublicKey {
    std::string scheme_id;
    mpz_class n;
    mpz_class n_squared;

    const mpz_class& plaintext_modulus() const { return n; }

    Bytes serialize() const;  // "PPHK"
    static std::shared_ptr<const PublicKey> deserialize(std::span<const std::uint8_t> data);
};

struct PrivateKey {
    std::string scheme_id;
    mpz_class p, q;
    mpz_class n;
    // CRT decryption precomputation.
    mpz_class p_squared, q_squared;
    mpz_class hp, hq;       // L_p(g^(p-1) mod p^2)^-1 mod p, likewise for q
    mpz_class q_inv_p;      // q^-1 mod p

    Bytes serialize() const;  // "PPHS"
    static PrivateKey deserialize(std::span<const std::uint8_t> data);
};

struct KeyPair {
    std::shared_ptr<const PublicKey> pk;
    PrivateKey sk;
};

// Opaque encrypted integer. Carries its public key so the homomorphic
// operations can check scheme compatibility.
struct Ciphertext {
    std::shared_ptr<const PublicKey> pk;
    mpz_class value;
};

// security_bits is the modulus size; one of 1024, 2048, 3072.
KeyPair keygen(unsigned security_bits, RandomSource& rng = secure_random());

Ciphertext encrypt(std::shared_ptr<const PublicKey> pk, const mpz_class& x,
                   RandomSource& rng = secure_random());
mpz_class decrypt(const PrivateKey& sk, const Ciphertext& c);

// Ciphertext-space product; decrypts to the sum mod n.
Ciphertext add(const Ciphertext& a, const Ciphertext& b);

// Ciphertext-space power; decrypts to x*z mod n. Negative z goes through the
// modular inverse of the ciphertext.
Ciphertext scalar_mul(const Ciphertext& c, const mpz_class& z);

// Multiplicative inverse of the ciphertext; decrypts to n - x mod n.
Ciphertext neg(const Ciphertext& c);

// Multiply by a fresh encryption of zero; decrypts identically.
Ciphertext rerandomize(std::shared_ptr<const PublicKey> pk, const Ciphertext& c,
                       RandomSource& rng = secure_random());

}  // namespace ppsm
