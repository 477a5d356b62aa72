#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lorapdr/store.hpp"

namespace lorapdr::netserver {

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    std::string to_string() const;
};

/// Parses `host:port`. Throws ConfigError.
Endpoint parse_endpoint(std::string_view address);

/// Transport-free protocol state machine for one client connection.
///
/// The first message must be a successful `auth`; anything else before that
/// gets an error (or auth_fail) and closes the connection. After auth, each
/// `query` is answered with `packets`, and other violations get an `error`
/// while the connection stays open.
class Session {
public:
    struct Reply {
        std::string line;   ///< serialized response, without newline
        bool close = false;
    };

    Session(const PacketStore& store, std::string token);

    Reply handle_line(std::string_view line);
    bool authenticated() const { return authenticated_; }

private:
    const PacketStore& store_;
    std::string token_;
    bool authenticated_ = false;
};

/// TCP listener serving the newline-delimited JSON protocol, one thread per
/// client connection.
class Server {
public:
    Server(std::shared_ptr<PacketStore> store, std::string token);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts accepting. Port 0 picks an ephemeral port.
    /// Throws ConnectivityError when the address cannot be bound.
    void start(const std::string& bind_address);
    void stop();

    std::uint16_t port() const { return port_; }
    std::string address() const;

    PacketStore& store() { return *store_; }

private:
    struct Connection {
        int fd = -1;
        std::thread worker;
        std::atomic<bool> done{false};
    };

    void accept_loop();
    void serve_connection(Connection& connection);
    void reap_finished();

    std::shared_ptr<PacketStore> store_;
    std::string token_;
    std::string host_;
    std::uint16_t port_ = 0;
    int listen_fd_ = -1;
    std::atomic<bool> stopping_{false};
    std::thread acceptor_;
    std::mutex connections_mutex_;
    std::list<Connection> connections_;
};

}  // namespace lorapdr::netserver
