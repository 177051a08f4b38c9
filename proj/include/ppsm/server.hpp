#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "ppsm/wire.hpp"

namespace ppsm {

// Everything a session needs, shared read-only across sessions. The server
// never holds a PrivateKey.
struct ServerContext {
    ServerContext(std::string sequence, std::shared_ptr<const GramDictionary> dict,
                  ProtocolParams params);

    std::string sequence;
    std::shared_ptr<const GramDictionary> dict;
    ProtocolParams params;
    Bytes params_bytes;      // canonical serialization, compared against HELLO
    BloomFilter filter;      // prebuilt from sequence
};

// One full session over any Stream: HELLO -> QUERY -> RESPONSE, with ERROR
// frames for anything malformed. Never throws; returns false when the
// session ended in an error frame or disconnect.
bool handle_session(Stream& stream, const ServerContext& ctx,
                    RandomSource& rng = secure_random());

class TcpServer {
public:
    explicit TcpServer(std::shared_ptr<const ServerContext> ctx, int session_timeout_ms = 30000);
    ~TcpServer();

    // Binds and starts the accept loop on a background thread. Returns the
    // bound port (useful with port 0).
    std::uint16_t start(const std::string& host, std::uint16_t port);
    void stop();

    // Blocks until stop(); for the CLI foreground mode.
    void wait();

private:
    void accept_loop();

    std::shared_ptr<const ServerContext> ctx_;
    int timeout_ms_;
    int listen_fd_ = -1;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
};

}  // namespace ppsm
