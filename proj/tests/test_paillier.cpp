#include <set>

#include "doctest.h"
#include "ppsm/errors.hpp"
#include "ppsm/paillier.hpp"
#include "test_util.hpp"

using namespace ppsm;
using ppsm::test::DeterministicRandom;
using ppsm::test::shared_keys;

TEST_CASE("keygen rejects unsupported sizes") {
    DeterministicRandom rng(1);
    CHECK_THROWS_AS(keygen(512, rng), UnsupportedSecurityLevel);
    CHECK_THROWS_AS(keygen(1000, rng), UnsupportedSecurityLevel);
}

TEST_CASE("roundtrip at the boundaries") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(2);
    const mpz_class& m = keys.pk->plaintext_modulus();

    CHECK(decrypt(keys.sk, encrypt(keys.pk, 0, rng)) == 0);
    CHECK(decrypt(keys.sk, encrypt(keys.pk, 42, rng)) == 42);
    CHECK(decrypt(keys.sk, encrypt(keys.pk, m - 1, rng)) == m - 1);
    CHECK_THROWS_AS(encrypt(keys.pk, m, rng), PlaintextOutOfRange);
    CHECK_THROWS_AS(encrypt(keys.pk, mpz_class(-1), rng), PlaintextOutOfRange);
}

TEST_CASE("encryption is probabilistic") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(3);
    std::set<mpz_class> payloads;
    for (int i = 0; i < 100; ++i) payloads.insert(encrypt(keys.pk, 5, rng).value);
    CHECK(payloads.size() == 100);
}

TEST_CASE("additive homomorphism") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(4);
    const mpz_class& m = keys.pk->plaintext_modulus();

    CHECK(decrypt(keys.sk, add(encrypt(keys.pk, 3, rng), encrypt(keys.pk, 4, rng))) == 7);

    for (int i = 0; i < 50; ++i) {
        mpz_class x = rng.below(m), y = rng.below(m);
        Ciphertext sum = add(encrypt(keys.pk, x, rng), encrypt(keys.pk, y, rng));
        CHECK(decrypt(keys.sk, sum) == (x + y) % m);
    }
}

TEST_CASE("adding an encrypted zero is the identity") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(5);
    Ciphertext c = encrypt(keys.pk, 1234, rng);
    CHECK(decrypt(keys.sk, add(c, encrypt(keys.pk, 0, rng))) == 1234);
}

TEST_CASE("folding encrypted bits gives the popcount") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(6);
    std::vector<int> bits = {1, 0, 1, 1, 0, 1, 0, 0, 1, 1};
    Ciphertext acc = encrypt(keys.pk, bits[0], rng);
    int expected = bits[0];
    for (std::size_t i = 1; i < bits.size(); ++i) {
        acc = add(acc, encrypt(keys.pk, bits[i], rng));
        expected += bits[i];
    }
    CHECK(decrypt(keys.sk, acc) == expected);
}

TEST_CASE("scalar multiplication") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(7);
    const mpz_class& m = keys.pk->plaintext_modulus();

    CHECK(decrypt(keys.sk, scalar_mul(encrypt(keys.pk, 5, rng), 0)) == 0);
    CHECK(decrypt(keys.sk, scalar_mul(encrypt(keys.pk, 5, rng), -1)) == m - 5);

    for (int i = 0; i < 30; ++i) {
        mpz_class x = rng.below(m);
        mpz_class z = mpz_class(rng.uniform(1ull << 33)) - mpz_class(1ul << 32);
        mpz_class expected = x * z % m;
        if (sgn(expected) < 0) expected += m;
        CHECK(decrypt(keys.sk, scalar_mul(encrypt(keys.pk, x, rng), z)) == expected);
    }
}

TEST_CASE("negation") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(8);
    const mpz_class& m = keys.pk->plaintext_modulus();

    CHECK(decrypt(keys.sk, neg(encrypt(keys.pk, 0, rng))) == 0);
    Ciphertext seven = encrypt(keys.pk, 7, rng);
    CHECK(decrypt(keys.sk, add(seven, neg(seven))) == 0);
    CHECK(decrypt(keys.sk, add(encrypt(keys.pk, 3, rng), neg(encrypt(keys.pk, 10, rng)))) ==
          m - 7);
    // involution at the plaintext level
    Ciphertext c = encrypt(keys.pk, 99, rng);
    CHECK(decrypt(keys.sk, neg(neg(c))) == 99);
}

TEST_CASE("rerandomize preserves the plaintext and changes the payload") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(9);
    Ciphertext c = encrypt(keys.pk, 9, rng);
    Ciphertext r = rerandomize(keys.pk, c, rng);
    CHECK(decrypt(keys.sk, r) == 9);
    CHECK(r.value != c.value);
}

TEST_CASE("scheme mismatch is detected") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(10);
    KeyPair other = keygen(1024, rng);
    Ciphertext a = encrypt(keys.pk, 1, rng);
    Ciphertext b = encrypt(other.pk, 1, rng);
    CHECK_THROWS_AS(add(a, b), SchemeMismatch);
    CHECK_THROWS_AS(decrypt(keys.sk, b), SchemeMismatch);
}

TEST_CASE("key file roundtrip") {
    const auto& keys = shared_keys();
    DeterministicRandom rng(11);

    auto pk = PublicKey::deserialize(keys.pk->serialize());
    CHECK(pk->n == keys.pk->n);
    CHECK(pk->scheme_id == keys.pk->scheme_id);

    PrivateKey sk = PrivateKey::deserialize(keys.sk.serialize());
    Ciphertext c = encrypt(pk, 77, rng);
    CHECK(decrypt(sk, c) == 77);
}

TEST_CASE("plaintext modulus is large") {
    const auto& keys = shared_keys();
    mpz_class limit = mpz_class(1) << 64;
    CHECK(keys.pk->plaintext_modulus() > limit);
}
