#include "ppsm/stream.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "ppsm/errors.hpp"

namespace ppsm {

bool Stream::read_exact(std::uint8_t* out, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
        std::size_t r = read(out + got, n - got);
        if (r == 0) {
            if (got == 0) return false;
            throw ParseError("stream ended mid-message");
        }
        got += r;
    }
    return true;
}

std::size_t MemoryStream::read(std::uint8_t* out, std::size_t n) {
    std::size_t avail = in_.size() - pos_;
    std::size_t take = std::min(n, avail);
    std::memcpy(out, in_.data() + pos_, take);
    pos_ += take;
    return take;
}

void MemoryStream::write(const std::uint8_t* data, std::size_t n) {
    out_.insert(out_.end(), data, data + n);
}

TcpStream::~TcpStream() {
    if (fd_ >= 0) ::close(fd_);
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string service = std::to_string(port);
    if (getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || res == nullptr)
        throw ConnectionError("cannot resolve " + host);

    int fd = -1;
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    freeaddrinfo(res);
    if (fd < 0) throw ConnectionError("cannot connect to " + host + ":" + service);
    int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpStream(fd);
}

std::size_t TcpStream::read(std::uint8_t* out, std::size_t n) {
    for (;;) {
        ssize_t r = ::recv(fd_, out, n, 0);
        if (r >= 0) return static_cast<std::size_t>(r);
        if (errno == EINTR) continue;
        throw ConnectionError(std::string("recv failed: ") + std::strerror(errno));
    }
}

void TcpStream::write(const std::uint8_t* data, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
        ssize_t w = ::send(fd_, data + sent, n - sent, MSG_NOSIGNAL);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw ConnectionError(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(w);
    }
}

void TcpStream::set_timeout_ms(int ms) {
    timeval tv{ms / 1000, (ms % 1000) * 1000};
    setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

}  // namespace ppsm
