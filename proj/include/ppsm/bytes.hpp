#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ppsm/errors.hpp"

namespace ppsm {

using Bytes = std::vector<std::uint8_t>;

// Big-endian byte-level serialization used by every on-disk and on-wire
// format in the project.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u16(std::uint16_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v));
    }

    void u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

    void u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

    void raw(std::span<const std::uint8_t> bytes) {
        buf_.insert(buf_.end(), bytes.begin(), bytes.end());
    }

    void raw(std::string_view s) {
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    // u8 length prefix, then the bytes. Used for short identifiers.
    void short_string(std::string_view s) {
        if (s.size() > 255) throw IoError("identifier longer than 255 bytes");
        u8(static_cast<std::uint8_t>(s.size()));
        raw(s);
    }

    // u32 length prefix, then the unsigned big-endian magnitude.
    void bigint(const mpz_class& v) {
        if (sgn(v) < 0) throw IoError("negative big integer on the wire");
        if (sgn(v) == 0) {
            u32(0);
            return;
        }
        std::size_t count = 0;
        Bytes mag((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
        mpz_export(mag.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
        mag.resize(count);
        u32(static_cast<std::uint32_t>(mag.size()));
        raw(mag);
    }

    // IEEE-754 bit pattern, big-endian; keeps the serialization canonical.
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        u64(bits);
    }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return take(1)[0]; }

    std::uint16_t u16() {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] << 8 | b[1]);
    }

    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | b[i];
        return v;
    }

    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
        return v;
    }

    Bytes raw(std::size_t n) {
        auto b = take(n);
        return Bytes(b.begin(), b.end());
    }

    std::string short_string() {
        std::size_t n = u8();
        auto b = take(n);
        return std::string(b.begin(), b.end());
    }

    mpz_class bigint() {
        std::size_t n = u32();
        if (n == 0) return mpz_class(0);
        auto b = take(n);
        mpz_class v;
        mpz_import(v.get_mpz_t(), n, 1, 1, 1, 0, b.data());
        return v;
    }

    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    bool empty() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

    void expect_end() const {
        if (!empty()) throw ParseError("trailing bytes after message body");
    }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        if (remaining() < n) throw ParseError("message truncated");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace ppsm
