#include "ppsm/paillier.hpp"

#include "ppsm/errors.hpp"

namespace ppsm {

namespace {

constexpr char kPkMagic[4] = {'P', 'P', 'H', 'K'};
constexpr char kSkMagic[4] = {'P', 'P', 'H', 'S'};

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

mpz_class invert(const mpz_class& v, const mpz_class& mod) {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw NotInvertible("value has no inverse modulo the scheme modulus");
    return out;
}

mpz_class random_prime(unsigned bits, RandomSource& rng) {
    std::vector<std::uint8_t> buf((bits + 7) / 8);
    rng.fill(buf.data(), buf.size());
    buf[0] |= 0xc0;  // full-size product
    buf[buf.size() - 1] |= 1;
    mpz_class v;
    mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), v.get_mpz_t());
    return p;
}

// L(x) = (x - 1) / d
mpz_class ell(const mpz_class& x, const mpz_class& d) { return (x - 1) / d; }

void precompute(PrivateKey& sk) {
    sk.n = sk.p * sk.q;
    sk.p_squared = sk.p * sk.p;
    sk.q_squared = sk.q * sk.q;
    mpz_class g = sk.n + 1;
    sk.hp = invert(ell(powm(g, sk.p - 1, sk.p_squared), sk.p) % sk.p, sk.p);
    sk.hq = invert(ell(powm(g, sk.q - 1, sk.q_squared), sk.q) % sk.q, sk.q);
    sk.q_inv_p = invert(sk.q % sk.p, sk.p);
}

void require_same_scheme(const Ciphertext& a, const Ciphertext& b) {
    if (!a.pk || !b.pk || a.pk->scheme_id != b.pk->scheme_id || a.pk->n != b.pk->n)
        throw SchemeMismatch("ciphertexts belong to different keys");
}

}  // namespace

KeyPair keygen(unsigned security_bits, RandomSource& rng) {
    if (security_bits != 1024 && security_bits != 2048 && security_bits != 3072)
        throw UnsupportedSecurityLevel("modulus size must be 1024, 2048 or 3072");

    for (;;) {
        mpz_class p = random_prime(security_bits / 2, rng);
        mpz_class q = random_prime(security_bits / 2, rng);
        if (p == q) continue;
        mpz_class n = p * q;
        mpz_class lambda = (p - 1) * (q - 1);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), lambda.get_mpz_t());
        if (g != 1) continue;

        auto pk = std::make_shared<PublicKey>();
        pk->scheme_id = std::string(kPaillierSchemeId);
        pk->n = n;
        pk->n_squared = n * n;

        PrivateKey sk;
        sk.scheme_id = pk->scheme_id;
        sk.p = std::move(p);
        sk.q = std::move(q);
        precompute(sk);
        return {std::move(pk), std::move(sk)};
    }
}

Ciphertext encrypt(std::shared_ptr<const PublicKey> pk, const mpz_class& x, RandomSource& rng) {
    if (!pk) throw SchemeMismatch("missing public key");
    if (sgn(x) < 0 || x >= pk->n) throw PlaintextOutOfRange("plaintext outside [0, M)");
    mpz_class r;
    do {
        r = rng.below(pk->n);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk->n.get_mpz_t());
        if (sgn(r) != 0 && g == 1) break;
    } while (true);
    // (1 + x*n) * r^n mod n^2, using g = n + 1.
    mpz_class c = (1 + x * pk->n) % pk->n_squared;
    c = c * powm(r, pk->n, pk->n_squared) % pk->n_squared;
    return {std::move(pk), std::move(c)};
}

mpz_class decrypt(const PrivateKey& sk, const Ciphertext& c) {
    if (!c.pk || c.pk->scheme_id != sk.scheme_id || c.pk->n != sk.n)
        throw SchemeMismatch("ciphertext does not match the private key");
    mpz_class mp = ell(powm(c.value, sk.p - 1, sk.p_squared), sk.p) * sk.hp % sk.p;
    mpz_class mq = ell(powm(c.value, sk.q - 1, sk.q_squared), sk.q) * sk.hq % sk.q;
    mpz_class diff = (mp - mq) % sk.p;
    if (sgn(diff) < 0) diff += sk.p;
    return (mq + sk.q * (diff * sk.q_inv_p % sk.p)) % sk.n;
}

Ciphertext add(const Ciphertext& a, const Ciphertext& b) {
    require_same_scheme(a, b);
    return {a.pk, a.value * b.value % a.pk->n_squared};
}

Ciphertext scalar_mul(const Ciphertext& c, const mpz_class& z) {
    if (!c.pk) throw SchemeMismatch("missing public key");
    mpz_class base = sgn(z) < 0 ? invert(c.value, c.pk->n_squared) : c.value;
    return {c.pk, powm(base, abs(z), c.pk->n_squared)};
}

Ciphertext neg(const Ciphertext& c) {
    if (!c.pk) throw SchemeMismatch("missing public key");
    return {c.pk, invert(c.value, c.pk->n_squared)};
}

Ciphertext rerandomize(std::shared_ptr<const PublicKey> pk, const Ciphertext& c,
                       RandomSource& rng) {
    return add(c, encrypt(std::move(pk), 0, rng));
}

Bytes PublicKey::serialize() const {
    ByteWriter w;
    w.raw(std::string_view(kPkMagic, 4));
    w.u16(1);
    w.short_string(scheme_id);
    w.bigint(n);
    return w.take();
}

std::shared_ptr<const PublicKey> PublicKey::deserialize(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) !=
        std::string_view(kPkMagic, 4))
        throw ParseError("bad public key magic");
    if (r.u16() != 1) throw ParseError("unsupported public key version");
    auto pk = std::make_shared<PublicKey>();
    pk->scheme_id = r.short_string();
    pk->n = r.bigint();
    if (pk->scheme_id != kPaillierSchemeId) throw SchemeMismatch("unknown scheme id");
    if (mpz_sizeinbase(pk->n.get_mpz_t(), 2) <= 64)
        throw ParseError("modulus too small");
    pk->n_squared = pk->n * pk->n;
    r.expect_end();
    return pk;
}

Bytes PrivateKey::serialize() const {
    ByteWriter w;
    w.raw(std::string_view(kSkMagic, 4));
    w.u16(1);
    w.short_string(scheme_id);
    w.bigint(n);
    w.bigint(p);
    w.bigint(q);
    return w.take();
}

PrivateKey PrivateKey::deserialize(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) !=
        std::string_view(kSkMagic, 4))
        throw ParseError("bad private key magic");
    if (r.u16() != 1) throw ParseError("unsupported private key version");
    PrivateKey sk;
    sk.scheme_id = r.short_string();
    if (sk.scheme_id != kPaillierSchemeId) throw SchemeMismatch("unknown scheme id");
    mpz_class n = r.bigint();
    sk.p = r.bigint();
    sk.q = r.bigint();
    r.expect_end();
    precompute(sk);
    if (sk.n != n) throw ParseError("private key modulus does not match its factors");
    return sk;
}

}  // namespace ppsm
