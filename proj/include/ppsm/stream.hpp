#pragma once

#include <cstdint>
#include <string>

#include "ppsm/bytes.hpp"

namespace ppsm {

// Byte stream the wire layer runs over: TCP socket, in-memory buffer for
// tests, or file pairs for the offline mode. All three carry identical
// frames.
class Stream {
public:
    virtual ~Stream() = default;

    // Returns bytes read; 0 means end of stream.
    virtual std::size_t read(std::uint8_t* out, std::size_t n) = 0;
    virtual void write(const std::uint8_t* data, std::size_t n) = 0;

    // True on success, false on clean EOF at offset 0; throws on EOF
    // mid-buffer.
    bool read_exact(std::uint8_t* out, std::size_t n);
    void write_all(std::span<const std::uint8_t> data) { write(data.data(), data.size()); }
};

class MemoryStream final : public Stream {
public:
    MemoryStream() = default;
    explicit MemoryStream(Bytes input) : in_(std::move(input)) {}

    std::size_t read(std::uint8_t* out, std::size_t n) override;
    void write(const std::uint8_t* data, std::size_t n) override;

    const Bytes& written() const { return out_; }
    Bytes take_written() { return std::move(out_); }

private:
    Bytes in_;
    std::size_t pos_ = 0;
    Bytes out_;
};

class TcpStream final : public Stream {
public:
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream() override;

    static TcpStream connect(const std::string& host, std::uint16_t port);

    std::size_t read(std::uint8_t* out, std::size_t n) override;
    void write(const std::uint8_t* data, std::size_t n) override;

    void set_timeout_ms(int ms);
    int fd() const { return fd_; }

private:
    int fd_ = -1;
};

}  // namespace ppsm
