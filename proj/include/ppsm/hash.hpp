#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace ppsm {

using Digest256 = std::array<std::uint8_t, 32>;

std::array<std::uint8_t, 20> sha1(std::span<const std::uint8_t> data);
Digest256 sha256(std::span<const std::uint8_t> data);

// Bloom index: SHA-1 digest read as an unsigned big-endian integer, reduced
// modulo the filter length. 0-based.
std::uint64_t sha1_mod(std::span<const std::uint8_t> element, std::uint64_t modulus);

std::string hex(std::span<const std::uint8_t> data);

}  // namespace ppsm
