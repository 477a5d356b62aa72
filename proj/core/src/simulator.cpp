#include "lorapdr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

void validate_device(const DeviceSpec& device)
{
    if (device.device_id.empty()) {
        throw ConfigError("device id must not be empty");
    }
    if (!is_valid_eui(device.dev_eui)) {
        throw ConfigError(fmt::format("device {}: invalid EUI '{}'", device.device_id, device.dev_eui));
    }
    if (device.sf < 7 || device.sf > 12) {
        throw ConfigError(fmt::format("device {}: spreading factor {} outside 7..12", device.device_id, device.sf));
    }
    if (!(device.period > 0.0) || !(device.airtime > 0.0) || !(device.airtime < device.period)) {
        throw ConfigError(fmt::format("device {}: need 0 < airtime ({}) < period ({})", device.device_id,
                                      device.airtime, device.period));
    }
    if (device.phase && !(*device.phase >= 0.0 && *device.phase < device.period)) {
        throw ConfigError(fmt::format("device {}: phase {} outside [0, period)", device.device_id, *device.phase));
    }
    if (!(device.active_from < device.active_until)) {
        throw ConfigError(fmt::format("device {}: active window [{}, {}) is empty", device.device_id,
                                      device.active_from, device.active_until));
    }
}

void resolve_any_overlap(std::vector<TransmissionEvent>& events, const std::vector<std::size_t>& order)
{
    std::vector<std::size_t> active;
    for (std::size_t idx : order) {
        auto& event = events[idx];
        std::erase_if(active, [&](std::size_t other) { return events[other].end <= event.start; });
        if (!active.empty()) {
            event.delivered = false;
            for (std::size_t other : active) {
                events[other].delivered = false;
            }
        }
        active.push_back(idx);
    }
}

void resolve_window(std::vector<TransmissionEvent>& events, const std::vector<std::size_t>& order, double factor)
{
    std::vector<double> starts;
    starts.reserve(order.size());
    for (std::size_t idx : order) {
        starts.push_back(events[idx].start);
    }
    for (std::size_t idx : order) {
        auto& event = events[idx];
        const double airtime = event.end - event.start;
        const double lo = event.start + (1.0 - factor) * airtime;
        const double hi = event.end;
        const auto first = std::lower_bound(starts.begin(), starts.end(), lo);
        const auto last = std::lower_bound(starts.begin(), starts.end(), hi);
        // A device never interferes with itself; with f > 1 the window can
        // reach back to its own previous, back-to-back packet.
        std::ptrdiff_t count = 0;
        for (auto it = first; it != last; ++it) {
            if (events[order[static_cast<std::size_t>(it - starts.begin())]].device != event.device) {
                ++count;
            }
        }
        if (count > 0) {
            event.delivered = false;
        }
    }
}

}  // namespace

CollisionModel CollisionModel::vulnerability_window(double factor)
{
    CollisionModel model{Kind::VulnerabilityWindow, factor};
    model.validate();
    return model;
}

void CollisionModel::validate() const
{
    if (kind == Kind::VulnerabilityWindow && !(factor > 0.0 && factor <= 2.0)) {
        throw ConfigError(fmt::format("vulnerability window factor {} outside (0, 2]", factor));
    }
}

std::uint64_t SimResult::total_sent() const
{
    std::uint64_t total = 0;
    for (const auto& d : devices) {
        total += d.sent;
    }
    return total;
}

std::uint64_t SimResult::total_delivered() const
{
    std::uint64_t total = 0;
    for (const auto& d : devices) {
        total += d.delivered;
    }
    return total;
}

double SimResult::network_pdr() const
{
    const auto sent = total_sent();
    return sent == 0 ? 0.0 : static_cast<double>(total_delivered()) / static_cast<double>(sent);
}

double period_offset(const DeviceSpec& device, std::uint64_t seed, std::uint32_t k)
{
    if (device.phase) {
        return *device.phase;
    }
    std::uint64_t state = seed ^ fnv1a(normalize_eui(device.dev_eui));
    state += static_cast<std::uint64_t>(k) * 0xD1B54A32D192ED03ULL;
    const std::uint64_t bits = splitmix64(state) >> 11;
    const double unit = static_cast<double>(bits) * 0x1.0p-53;
    return std::min(unit * device.period, std::nextafter(device.period, 0.0));
}

SimResult run(std::span<const DeviceSpec> devices, double duration, CollisionModel model, std::uint64_t seed)
{
    if (!(duration > 0.0)) {
        throw ConfigError(fmt::format("duration {} must be positive", duration));
    }
    if (devices.empty()) {
        throw ConfigError("device set is empty");
    }
    model.validate();

    SimResult result;
    result.devices.reserve(devices.size());
    std::unordered_set<std::string> euis;
    std::unordered_set<std::string> ids;
    for (const auto& device : devices) {
        validate_device(device);
        auto eui = normalize_eui(device.dev_eui);
        if (!euis.insert(eui).second) {
            throw ConfigError(fmt::format("duplicate EUI {}", eui));
        }
        if (!ids.insert(device.device_id).second) {
            throw ConfigError(fmt::format("duplicate device id {}", device.device_id));
        }
        result.devices.push_back(DeviceOutcome{device.device_id, std::move(eui), device.sf, 0, 0});
    }

    for (std::size_t i = 0; i < devices.size(); ++i) {
        const auto& device = devices[i];
        const double stop = std::min(device.active_until, duration);
        double previous_end = -std::numeric_limits<double>::infinity();
        for (std::uint32_t k = 0;; ++k) {
            const double frame = device.active_from + static_cast<double>(k) * device.period;
            if (!(frame < stop)) {
                break;
            }
            const double start = std::max(frame + period_offset(device, seed, k), previous_end);
            if (!(start < stop)) {
                break;
            }
            previous_end = start + device.airtime;
            result.events.push_back(TransmissionEvent{i, k, start, previous_end, device.sf, true});
        }
    }

    std::sort(result.events.begin(), result.events.end(), [&](const auto& a, const auto& b) {
        if (a.start != b.start) {
            return a.start < b.start;
        }
        return result.devices[a.device].device_id < result.devices[b.device].device_id;
    });

    std::map<int, std::vector<std::size_t>> by_sf;
    for (std::size_t idx = 0; idx < result.events.size(); ++idx) {
        by_sf[result.events[idx].sf].push_back(idx);
    }
    for (const auto& [sf, order] : by_sf) {
        if (model.kind == CollisionModel::Kind::AnyOverlap) {
            resolve_any_overlap(result.events, order);
        } else {
            resolve_window(result.events, order, model.factor);
        }
    }

    for (const auto& event : result.events) {
        auto& outcome = result.devices[event.device];
        ++outcome.sent;
        if (event.delivered) {
            ++outcome.delivered;
        }
    }
    return result;
}

std::vector<PacketRecord> export_packet_log(const SimResult& result)
{
    std::vector<const TransmissionEvent*> delivered;
    for (const auto& event : result.events) {
        if (event.delivered) {
            delivered.push_back(&event);
        }
    }
    std::stable_sort(delivered.begin(), delivered.end(), [&](const auto* a, const auto* b) {
        if (a->end != b->end) {
            return a->end < b->end;
        }
        return result.devices[a->device].device_id < result.devices[b->device].device_id;
    });

    std::vector<PacketRecord> records;
    records.reserve(delivered.size());
    for (const auto* event : delivered) {
        records.push_back(PacketRecord{result.devices[event->device].dev_eui, event->fcnt, event->end, event->sf});
    }
    return records;
}

void write_event_log(std::ostream& out, const SimResult& result)
{
    for (const auto& event : result.events) {
        out << fmt::format("{:.9f}\t{:.9f}\t{}\t{}\t{}\t{}\n", event.start, event.end,
                           result.devices[event.device].device_id, event.fcnt, event.sf,
                           event.delivered ? "delivered" : "lost");
    }
}

}  // namespace lorapdr::sim
