#pragma once

#include <chrono>
#include <string>

#include "lorapdr/packet.hpp"
#include "lorapdr/protocol.hpp"

namespace lorapdr::netserver {

/// Blocking client for the network server's line protocol.
class Client : public PacketSource {
public:
    /// Throws ConnectivityError when the server is unreachable.
    static Client connect(const std::string& address,
                          std::chrono::milliseconds timeout = std::chrono::seconds(10));

    Client(Client&& other) noexcept;
    Client& operator=(Client&& other) noexcept;
    Client(const Client&) = delete;
    Client& operator=(const Client&) = delete;
    ~Client() override;

    /// Throws ProtocolError when the server answers anything but auth_ok.
    void authenticate(const std::string& token);

    /// Throws ProtocolError on an error reply, ConnectivityError on I/O failure.
    std::vector<PacketRecord> query(const std::string& dev_eui, double from_ts, double to_ts) override;

    protocol::Message exchange(const protocol::Message& request);

    /// Sends one raw line and returns the next line received.
    std::string exchange_raw(const std::string& line);

    void send_line(const std::string& line);
    /// Throws ConnectivityError when the peer closed the stream.
    std::string read_line();

private:
    explicit Client(int fd);

    int fd_ = -1;
    std::string buffer_;
};

}  // namespace lorapdr::netserver
