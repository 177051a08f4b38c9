#include "ppsm/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace ppsm {

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> digest(const EVP_MD* md, std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, N> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 || len != N)
        throw std::runtime_error("digest computation failed");
    return out;
}

}  // namespace

std::array<std::uint8_t, 20> sha1(std::span<const std::uint8_t> data) {
    return digest<20>(EVP_sha1(), data);
}

Digest256 sha256(std::span<const std::uint8_t> data) {
    return digest<32>(EVP_sha256(), data);
}

std::uint64_t sha1_mod(std::span<const std::uint8_t> element, std::uint64_t modulus) {
    auto d = sha1(element);
    // Big-endian reduction byte by byte; intermediate fits in 128 bits.
    unsigned __int128 acc = 0;
    for (std::uint8_t byte : d) acc = (acc << 8 | byte) % modulus;
    return static_cast<std::uint64_t>(acc);
}

std::string hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

}  // namespace ppsm
