#include "lorapdr/client.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"
#include "lorapdr/server.hpp"

namespace lorapdr::netserver {

Client Client::connect(const std::string& address, std::chrono::milliseconds timeout)
{
    const auto endpoint = parse_endpoint(address);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const auto port_text = std::to_string(endpoint.port);
    if (const int rc = ::getaddrinfo(endpoint.host.c_str(), port_text.c_str(), &hints, &found); rc != 0) {
        throw ConnectivityError(fmt::format("cannot resolve {}: {}", address, ::gai_strerror(rc)));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(found, &::freeaddrinfo);

    std::string last_error = "no addresses";
    for (auto* ai = found; ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = std::strerror(errno);
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            timeval tv{};
            tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
            tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
            ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
            return Client(fd);
        }
        last_error = std::strerror(errno);
        ::close(fd);
    }
    throw ConnectivityError(fmt::format("cannot connect to {}: {}", address, last_error));
}

Client::Client(int fd) : fd_(fd) {}

Client::Client(Client&& other) noexcept : fd_(std::exchange(other.fd_, -1)), buffer_(std::move(other.buffer_)) {}

Client& Client::operator=(Client&& other) noexcept
{
    if (this != &other) {
        if (fd_ >= 0) {
            ::close(fd_);
        }
        fd_ = std::exchange(other.fd_, -1);
        buffer_ = std::move(other.buffer_);
    }
    return *this;
}

Client::~Client()
{
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

void Client::send_line(const std::string& line)
{
    std::string_view data = line;
    std::string framed;
    if (data.empty() || data.back() != '\n') {
        framed = line + '\n';
        data = framed;
    }
    while (!data.empty()) {
        const auto n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ConnectivityError(fmt::format("send failed: {}", std::strerror(errno)));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::string Client::read_line()
{
    char chunk[4096];
    while (true) {
        if (const auto newline = buffer_.find('\n'); newline != std::string::npos) {
            auto line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            return line;
        }
        const auto n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n == 0) {
            throw ConnectivityError("server closed the connection");
        }
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ConnectivityError(fmt::format("receive failed: {}", std::strerror(errno)));
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::string Client::exchange_raw(const std::string& line)
{
    send_line(line);
    return read_line();
}

protocol::Message Client::exchange(const protocol::Message& request)
{
    return protocol::parse(exchange_raw(protocol::serialize(request)));
}

void Client::authenticate(const std::string& token)
{
    const auto reply = exchange(protocol::AuthRequest{token});
    if (std::holds_alternative<protocol::AuthOk>(reply)) {
        return;
    }
    if (const auto* fail = std::get_if<protocol::AuthFail>(&reply)) {
        throw ProtocolError(fmt::format("authentication rejected: {}", fail->reason));
    }
    throw ProtocolError(fmt::format("unexpected '{}' reply to auth", protocol::type_name(reply)));
}

std::vector<PacketRecord> Client::query(const std::string& dev_eui, double from_ts, double to_ts)
{
    const auto reply = exchange(protocol::QueryRequest{dev_eui, from_ts, to_ts});
    if (const auto* error = std::get_if<protocol::ErrorMessage>(&reply)) {
        throw ProtocolError(fmt::format("query for {} failed: {}", dev_eui, error->reason));
    }
    const auto* packets = std::get_if<protocol::PacketsResponse>(&reply);
    if (packets == nullptr) {
        throw ProtocolError(fmt::format("unexpected '{}' reply to query", protocol::type_name(reply)));
    }
    std::vector<PacketRecord> records;
    records.reserve(packets->packets.size());
    for (const auto& p : packets->packets) {
        records.push_back(PacketRecord{packets->dev_eui, p.fcnt, p.ts, p.sf});
    }
    return records;
}

}  // namespace lorapdr::netserver
