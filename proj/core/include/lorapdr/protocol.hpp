#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lorapdr::protocol {

// Newline-delimited JSON messages exchanged with the network server. Unknown
// fields are ignored on parse.

struct AuthRequest {
    std::string token;
    friend bool operator==(const AuthRequest&, const AuthRequest&) = default;
};

struct AuthOk {
    friend bool operator==(const AuthOk&, const AuthOk&) = default;
};

struct AuthFail {
    std::string reason;
    friend bool operator==(const AuthFail&, const AuthFail&) = default;
};

struct QueryRequest {
    std::string dev_eui;
    double from_ts = 0.0;
    double to_ts = 0.0;
    friend bool operator==(const QueryRequest&, const QueryRequest&) = default;
};

struct PacketEntry {
    std::uint32_t fcnt = 0;
    double ts = 0.0;
    int sf = 7;
    friend bool operator==(const PacketEntry&, const PacketEntry&) = default;
};

struct PacketsResponse {
    std::string dev_eui;
    std::vector<PacketEntry> packets;
    friend bool operator==(const PacketsResponse&, const PacketsResponse&) = default;
};

struct ErrorMessage {
    std::string reason;
    friend bool operator==(const ErrorMessage&, const ErrorMessage&) = default;
};

using Message = std::variant<AuthRequest, AuthOk, AuthFail, QueryRequest, PacketsResponse, ErrorMessage>;

/// One JSON object on a single line, without the trailing newline.
/// Throws ProtocolError for non-finite numbers.
std::string serialize(const Message& message);

/// Throws ProtocolError on malformed JSON, unknown type or missing fields.
Message parse(std::string_view line);

std::string_view type_name(const Message& message);

}  // namespace lorapdr::protocol
