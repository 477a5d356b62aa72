#include "lorapdr/protocol.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "lorapdr/errors.hpp"

namespace lorapdr::protocol {

namespace {

using nlohmann::json;

double finite(double value, std::string_view field)
{
    if (!std::isfinite(value)) {
        throw ProtocolError(fmt::format("field '{}' is not a finite number", field));
    }
    return value;
}

const json& require(const json& object, const char* field)
{
    const auto it = object.find(field);
    if (it == object.end()) {
        throw ProtocolError(fmt::format("missing field '{}'", field));
    }
    return *it;
}

std::string require_string(const json& object, const char* field)
{
    const auto& value = require(object, field);
    if (!value.is_string()) {
        throw ProtocolError(fmt::format("field '{}' must be a string", field));
    }
    return value.get<std::string>();
}

double require_number(const json& object, const char* field)
{
    const auto& value = require(object, field);
    if (!value.is_number()) {
        throw ProtocolError(fmt::format("field '{}' must be a number", field));
    }
    return value.get<double>();
}

template <typename Int>
Int require_integer(const json& object, const char* field)
{
    const auto& value = require(object, field);
    if (value.is_number_unsigned()) {
        const auto raw = value.get<std::uint64_t>();
        if (raw <= static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
            return static_cast<Int>(raw);
        }
    } else if (value.is_number_integer()) {
        const auto raw = value.get<std::int64_t>();
        if (raw >= static_cast<std::int64_t>(std::numeric_limits<Int>::min()) &&
            raw <= static_cast<std::int64_t>(std::numeric_limits<Int>::max())) {
            return static_cast<Int>(raw);
        }
    }
    throw ProtocolError(fmt::format("field '{}' must be an integer in range", field));
}

struct ToJson {
    json operator()(const AuthRequest& m) const { return {{"type", "auth"}, {"token", m.token}}; }
    json operator()(const AuthOk&) const { return {{"type", "auth_ok"}}; }
    json operator()(const AuthFail& m) const { return {{"type", "auth_fail"}, {"reason", m.reason}}; }
    json operator()(const QueryRequest& m) const
    {
        return {{"type", "query"}, {"dev_eui", m.dev_eui}, {"from", finite(m.from_ts, "from")},
                {"to", finite(m.to_ts, "to")}};
    }
    json operator()(const PacketsResponse& m) const
    {
        json packets = json::array();
        for (const auto& p : m.packets) {
            packets.push_back({{"fcnt", p.fcnt}, {"ts", finite(p.ts, "ts")}, {"sf", p.sf}});
        }
        return {{"type", "packets"}, {"dev_eui", m.dev_eui}, {"packets", std::move(packets)}};
    }
    json operator()(const ErrorMessage& m) const { return {{"type", "error"}, {"reason", m.reason}}; }
};

}  // namespace

std::string serialize(const Message& message)
{
    try {
        return std::visit(ToJson{}, message).dump();
    } catch (const json::exception& e) {
        throw ProtocolError(fmt::format("cannot serialize message: {}", e.what()));
    }
}

Message parse(std::string_view line)
{
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    json object = json::parse(line.begin(), line.end(), nullptr, false);
    if (object.is_discarded()) {
        throw ProtocolError("malformed JSON");
    }
    if (!object.is_object()) {
        throw ProtocolError("message must be a JSON object");
    }
    const auto type = require_string(object, "type");
    if (type == "auth") {
        return AuthRequest{require_string(object, "token")};
    }
    if (type == "auth_ok") {
        return AuthOk{};
    }
    if (type == "auth_fail") {
        return AuthFail{require_string(object, "reason")};
    }
    if (type == "query") {
        return QueryRequest{require_string(object, "dev_eui"), require_number(object, "from"),
                            require_number(object, "to")};
    }
    if (type == "packets") {
        PacketsResponse response{require_string(object, "dev_eui"), {}};
        const auto& packets = require(object, "packets");
        if (!packets.is_array()) {
            throw ProtocolError("field 'packets' must be an array");
        }
        for (const auto& p : packets) {
            if (!p.is_object()) {
                throw ProtocolError("packet entries must be objects");
            }
            response.packets.push_back(
                PacketEntry{require_integer<std::uint32_t>(p, "fcnt"), require_number(p, "ts"), require_integer<int>(p, "sf")});
        }
        return response;
    }
    if (type == "error") {
        return ErrorMessage{require_string(object, "reason")};
    }
    throw ProtocolError(fmt::format("unknown message type '{}'", type));
}

std::string_view type_name(const Message& message)
{
    static constexpr std::string_view names[] = {"auth", "auth_ok", "auth_fail", "query", "packets", "error"};
    return names[message.index()];
}

}  // namespace lorapdr::protocol
