#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lorapdr {

/// One uplink as stored by the network server.
struct PacketRecord {
    std::string dev_eui;
    std::uint32_t fcnt = 0;
    double received_ts = 0.0;
    int sf = 7;

    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

/// True for exactly 16 hexadecimal characters.
bool is_valid_eui(std::string_view eui);

/// Uppercases a valid EUI; throws ConfigError otherwise.
std::string normalize_eui(std::string_view eui);

}  // namespace lorapdr

namespace lorapdr {

/// Anything that answers per-device, closed-interval packet queries: the
/// in-process store or a connected network-server client.
class PacketSource {
public:
    virtual ~PacketSource() = default;

    /// Records of `dev_eui` with from_ts <= received_ts <= to_ts, ascending by
    /// (received_ts, fcnt).
    virtual std::vector<PacketRecord> query(const std::string& dev_eui, double from_ts, double to_ts) = 0;
};

}  // namespace lorapdr
