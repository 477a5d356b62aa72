#include "lorapdr/store.hpp"

#include <filesystem>
#include <limits>
#include <memory>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"
#include "lorapdr/packet_log.hpp"

namespace lorapdr::netserver {

std::unique_ptr<PacketStore> PacketStore::open(const std::string& path)
{
    auto store = std::make_unique<PacketStore>();
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        if (!in) {
            throw IoError(fmt::format("cannot read packet log {}", path));
        }
        store->ingest_stream(in);
    }
    store->log_.emplace(path, std::ios::app);
    if (!*store->log_) {
        throw IoError(fmt::format("cannot append to packet log {}", path));
    }
    return store;
}

bool PacketStore::insert_locked(const PacketRecord& record)
{
    auto& packets = devices_[record.dev_eui];
    const bool inserted = packets.emplace(Key{record.received_ts, record.fcnt}, record.sf).second;
    if (inserted) {
        ++size_;
        if (log_) {
            *log_ << packet_log::format_line(record) << '\n';
        }
    }
    return inserted;
}

IngestStats PacketStore::ingest(std::span<const PacketRecord> records)
{
    IngestStats stats;
    std::unique_lock lock(mutex_);
    for (const auto& record : records) {
        if (!is_valid_eui(record.dev_eui) || record.sf < 7 || record.sf > 12) {
            ++stats.malformed;
            continue;
        }
        PacketRecord normalized = record;
        normalized.dev_eui = normalize_eui(record.dev_eui);
        if (insert_locked(normalized)) {
            ++stats.ingested;
        } else {
            ++stats.duplicates;
        }
    }
    if (log_) {
        log_->flush();
    }
    return stats;
}

IngestStats PacketStore::ingest_stream(std::istream& in)
{
    auto parsed = packet_log::read(in);
    auto stats = ingest(parsed.records);
    stats.malformed += parsed.malformed;
    return stats;
}

std::vector<PacketRecord> PacketStore::query(const std::string& dev_eui, double from_ts, double to_ts)
{
    return find(dev_eui, from_ts, to_ts);
}

std::vector<PacketRecord> PacketStore::find(const std::string& dev_eui, double from_ts, double to_ts) const
{
    std::vector<PacketRecord> out;
    if (!is_valid_eui(dev_eui) || from_ts > to_ts) {
        return out;
    }
    const auto eui = normalize_eui(dev_eui);
    std::shared_lock lock(mutex_);
    const auto it = devices_.find(eui);
    if (it == devices_.end()) {
        return out;
    }
    const auto& packets = it->second;
    const auto first = packets.lower_bound(Key{from_ts, 0});
    const auto last = packets.upper_bound(Key{to_ts, std::numeric_limits<std::uint32_t>::max()});
    for (auto p = first; p != last; ++p) {
        out.push_back(PacketRecord{eui, p->first.second, p->first.first, p->second});
    }
    return out;
}

std::size_t PacketStore::size() const
{
    std::shared_lock lock(mutex_);
    return size_;
}

std::size_t PacketStore::device_count() const
{
    std::shared_lock lock(mutex_);
    return devices_.size();
}

}  // namespace lorapdr::netserver
