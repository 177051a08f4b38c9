#include "ppsm/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <vector>

namespace ppsm {

ServerContext::ServerContext(std::string sequence_in,
                             std::shared_ptr<const GramDictionary> dict_in,
                             ProtocolParams params_in)
    : sequence(std::move(sequence_in)),
      dict(std::move(dict_in)),
      params(std::move(params_in)),
      params_bytes(params.canonical_bytes()),
      filter(filter_from_string(sequence, *dict, params.bloom)) {
    if (dict->digest() != params.dict_digest)
        throw DictionaryMismatch("server dictionary does not match the parameters");
}

namespace {

void send_error(Stream& stream, ErrorCode code, std::string_view message) {
    try {
        write_frame(stream, MsgType::Error, encode_error_body(code, message));
    } catch (...) {
        // Peer already gone; nothing to report to.
    }
}

}  // namespace

bool handle_session(Stream& stream, const ServerContext& ctx, RandomSource& rng) {
    try {
        auto hello = read_frame(stream);
        if (!hello) return false;  // clean disconnect
        if (hello->type != MsgType::Hello) {
            send_error(stream, ErrorCode::Malformed, "expected HELLO");
            return false;
        }
        if (hello->body != ctx.params_bytes) {
            send_error(stream, ErrorCode::ParamsMismatch, "protocol parameters differ");
            return false;
        }

        auto frame = read_frame(stream);
        if (!frame) return false;
        if (frame->type != MsgType::Query) {
            send_error(stream, ErrorCode::Malformed, "expected QUERY");
            return false;
        }

        MatchQuery query = decode_query_body(frame->body);
        if (query.params.canonical_bytes() != ctx.params_bytes) {
            send_error(stream, ErrorCode::ParamsMismatch, "query parameters differ");
            return false;
        }

        MatchResponse response = server_eval(query, ctx.filter, *ctx.dict, rng);
        write_frame(stream, MsgType::Response, encode_response_body(response));
        return true;
    } catch (const ParseError& e) {
        send_error(stream, ErrorCode::Malformed, e.what());
    } catch (const Error& e) {
        send_error(stream, ErrorCode::Internal, e.what());
    } catch (const std::exception& e) {
        send_error(stream, ErrorCode::Internal, e.what());
    }
    return false;
}

TcpServer::TcpServer(std::shared_ptr<const ServerContext> ctx, int session_timeout_ms)
    : ctx_(std::move(ctx)), timeout_ms_(session_timeout_ms) {}

TcpServer::~TcpServer() { stop(); }

std::uint16_t TcpServer::start(const std::string& host, std::uint16_t port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw BindError("cannot create socket");
    int one = 1;
    setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (host.empty() || host == "0.0.0.0") {
        addr.sin_addr.s_addr = INADDR_ANY;
    } else if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw BindError("invalid listen address " + host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listen_fd_, 16) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw BindError("cannot bind " + host + ":" + std::to_string(port));
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
    return ntohs(bound.sin_port);
}

void TcpServer::accept_loop() {
    std::vector<std::thread> sessions;
    while (running_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        sessions.emplace_back([this, fd] {
            TcpStream stream(fd);
            stream.set_timeout_ms(timeout_ms_);
            handle_session(stream, *ctx_, secure_random());
        });
    }
    for (auto& t : sessions)
        if (t.joinable()) t.join();
}

void TcpServer::stop() {
    if (!running_.exchange(false)) return;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
}

void TcpServer::wait() {
    if (accept_thread_.joinable()) accept_thread_.join();
}

}  // namespace ppsm
