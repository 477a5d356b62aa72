#include "lorapdr/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"
#include "lorapdr/protocol.hpp"

namespace lorapdr::netserver {

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

bool send_all(int fd, std::string_view data)
{
    while (!data.empty()) {
        const auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

}  // namespace

std::string Endpoint::to_string() const
{
    return fmt::format("{}:{}", host, port);
}

Endpoint parse_endpoint(std::string_view address)
{
    const auto colon = address.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == address.size()) {
        throw ConfigError(fmt::format("address '{}' is not host:port", address));
    }
    const auto port_text = address.substr(colon + 1);
    unsigned port = 0;
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535) {
        throw ConfigError(fmt::format("address '{}' has an invalid port", address));
    }
    return Endpoint{std::string(address.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

Session::Session(const PacketStore& store, std::string token) : store_(store), token_(std::move(token)) {}

Session::Reply Session::handle_line(std::string_view line)
{
    using namespace protocol;
    Message message;
    try {
        message = parse(line);
    } catch (const ProtocolError& e) {
        return {serialize(ErrorMessage{e.what()}), !authenticated_};
    }

    if (!authenticated_) {
        if (const auto* auth = std::get_if<AuthRequest>(&message)) {
            if (auth->token == token_) {
                authenticated_ = true;
                return {serialize(AuthOk{}), false};
            }
            return {serialize(AuthFail{"invalid token"}), true};
        }
        return {serialize(ErrorMessage{"not authenticated"}), true};
    }

    if (const auto* query = std::get_if<QueryRequest>(&message)) {
        if (!is_valid_eui(query->dev_eui)) {
            return {serialize(ErrorMessage{fmt::format("invalid dev_eui '{}'", query->dev_eui)}), false};
        }
        if (query->from_ts > query->to_ts) {
            return {serialize(ErrorMessage{"query window has from > to"}), false};
        }
        PacketsResponse response{query->dev_eui, {}};
        for (const auto& record : store_.find(query->dev_eui, query->from_ts, query->to_ts)) {
            response.packets.push_back(PacketEntry{record.fcnt, record.received_ts, record.sf});
        }
        return {serialize(response), false};
    }
    if (std::holds_alternative<AuthRequest>(message)) {
        return {serialize(ErrorMessage{"already authenticated"}), false};
    }
    return {serialize(ErrorMessage{fmt::format("unexpected message type '{}'", type_name(message))}), false};
}

Server::Server(std::shared_ptr<PacketStore> store, std::string token)
    : store_(std::move(store)), token_(std::move(token))
{
    if (!store_) {
        throw ConfigError("server needs a packet store");
    }
    if (token_.empty()) {
        throw ConfigError("auth token must not be empty");
    }
}

Server::~Server()
{
    stop();
}

void Server::start(const std::string& bind_address)
{
    if (listen_fd_ >= 0) {
        throw ConfigError("server already started");
    }
    const auto endpoint = parse_endpoint(bind_address);

    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* found = nullptr;
    const auto port_text = std::to_string(endpoint.port);
    if (const int rc = ::getaddrinfo(endpoint.host.c_str(), port_text.c_str(), &hints, &found); rc != 0) {
        throw ConnectivityError(fmt::format("cannot resolve {}: {}", bind_address, ::gai_strerror(rc)));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(found, &::freeaddrinfo);

    const int fd = ::socket(found->ai_family, found->ai_socktype, found->ai_protocol);
    if (fd < 0) {
        throw ConnectivityError(fmt::format("socket(): {}", std::strerror(errno)));
    }
    const int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    if (::bind(fd, found->ai_addr, found->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
        const auto reason = std::strerror(errno);
        ::close(fd);
        throw ConnectivityError(fmt::format("cannot bind {}: {}", bind_address, reason));
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    host_ = endpoint.host;
    listen_fd_ = fd;
    stopping_ = false;
    acceptor_ = std::thread([this] { accept_loop(); });
}

std::string Server::address() const
{
    return fmt::format("{}:{}", host_, port_);
}

void Server::stop()
{
    if (listen_fd_ < 0) {
        return;
    }
    stopping_ = true;
    if (acceptor_.joinable()) {
        acceptor_.join();
    }
    ::close(listen_fd_);
    listen_fd_ = -1;

    std::lock_guard lock(connections_mutex_);
    for (auto& connection : connections_) {
        ::shutdown(connection.fd, SHUT_RDWR);
    }
    for (auto& connection : connections_) {
        if (connection.worker.joinable()) {
            connection.worker.join();
        }
        ::close(connection.fd);
    }
    connections_.clear();
}

void Server::reap_finished()
{
    std::lock_guard lock(connections_mutex_);
    for (auto it = connections_.begin(); it != connections_.end();) {
        if (it->done) {
            it->worker.join();
            ::close(it->fd);
            it = connections_.erase(it);
        } else {
            ++it;
        }
    }
}

void Server::accept_loop()
{
    while (!stopping_) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, 100);
        reap_finished();
        if (ready <= 0 || !(pfd.revents & POLLIN)) {
            continue;
        }
        const int client = ::accept(listen_fd_, nullptr, nullptr);
        if (client < 0) {
            continue;
        }
        std::lock_guard lock(connections_mutex_);
        auto& connection = connections_.emplace_back();
        connection.fd = client;
        connection.worker = std::thread([this, &connection] {
            serve_connection(connection);
            connection.done = true;
        });
    }
}

void Server::serve_connection(Connection& connection)
{
    Session session(*store_, token_);
    std::string buffer;
    char chunk[4096];
    while (!stopping_) {
        const auto n = ::recv(connection.fd, chunk, sizeof(chunk), 0);
        if (n == 0) {
            return;
        }
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            return;
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t newline;
        while ((newline = buffer.find('\n')) != std::string::npos) {
            const std::string line = buffer.substr(0, newline);
            buffer.erase(0, newline + 1);
            if (line.empty() || line == "\r") {
                continue;
            }
            const auto reply = session.handle_line(line);
            if (!send_all(connection.fd, reply.line + "\n") || reply.close) {
                ::shutdown(connection.fd, SHUT_RDWR);
                return;
            }
        }
        if (buffer.size() > kMaxLineBytes) {
            send_all(connection.fd, protocol::serialize(protocol::ErrorMessage{"line too long"}) + "\n");
            ::shutdown(connection.fd, SHUT_RDWR);
            return;
        }
    }
}

}  // namespace lorapdr::netserver
