#pragma once

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lorapdr/packet.hpp"

namespace lorapdr::netserver {

struct IngestStats {
    std::size_t ingested = 0;
    std::size_t duplicates = 0;
    std::size_t malformed = 0;
};

/// Packet records held by the mock network server.
///
/// Records are unique per device by (received_ts, fcnt); re-ingesting an
/// identical record is a no-op. When opened on a log file the existing file is
/// replayed and every newly stored record is appended to it. Queries take a
/// shared lock, ingestion an exclusive one.
class PacketStore : public PacketSource {
public:
    PacketStore() = default;

    /// Replays `path` if it exists, then appends to it. Throws IoError.
    static std::unique_ptr<PacketStore> open(const std::string& path);

    IngestStats ingest(std::span<const PacketRecord> records);

    /// Reads the packet log format; malformed lines are skipped and counted.
    IngestStats ingest_stream(std::istream& in);

    std::vector<PacketRecord> query(const std::string& dev_eui, double from_ts, double to_ts) override;
    std::vector<PacketRecord> find(const std::string& dev_eui, double from_ts, double to_ts) const;

    std::size_t size() const;
    std::size_t device_count() const;

private:
    using Key = std::pair<double, std::uint32_t>;

    bool insert_locked(const PacketRecord& record);

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::map<Key, int>> devices_;
    std::size_t size_ = 0;
    std::optional<std::ofstream> log_;
};

}  // namespace lorapdr::netserver
