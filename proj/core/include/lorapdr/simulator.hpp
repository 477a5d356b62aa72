#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorapdr/packet.hpp"

namespace lorapdr::sim {

/// A periodic transmitter. Attempt k starts at active_from + k * period +
/// offset. With an explicit phase the offset is that phase in every period.
/// Without one, a fresh uniform offset in [0, period) is drawn for each period
/// from a generator keyed on (seed, dev_eui, k), so a device's timeline does
/// not depend on the rest of the run. A drawn start that would overlap the
/// device's own previous packet is pushed back to that packet's end.
struct DeviceSpec {
    std::string device_id;
    std::string dev_eui;
    int sf = 7;
    double period = 1.0;
    double airtime = 0.1;
    std::optional<double> phase;
    double active_from = 0.0;
    double active_until = std::numeric_limits<double>::infinity();
};

struct TransmissionEvent {
    std::size_t device = 0;  ///< index into SimResult::devices
    std::uint32_t fcnt = 0;
    double start = 0.0;
    double end = 0.0;
    int sf = 7;
    bool delivered = true;
};

/// How overlapping same-SF packets destroy each other.
///
/// AnyOverlap: a packet is lost iff another packet's [start, end) intersects
/// its own. VulnerabilityWindow(f): a packet is lost iff another packet starts
/// in [end - f * airtime, end). f = 2 reproduces AnyOverlap for equal airtimes;
/// f = 1 loses a packet only when another one starts on top of it.
struct CollisionModel {
    enum class Kind { AnyOverlap, VulnerabilityWindow };

    Kind kind = Kind::AnyOverlap;
    double factor = 2.0;

    static CollisionModel any_overlap() { return {Kind::AnyOverlap, 2.0}; }
    static CollisionModel vulnerability_window(double factor);

    void validate() const;
};

struct DeviceOutcome {
    std::string device_id;
    std::string dev_eui;
    int sf = 7;
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;

    double pdr() const { return sent == 0 ? 0.0 : static_cast<double>(delivered) / static_cast<double>(sent); }
};

struct SimResult {
    std::vector<DeviceOutcome> devices;       ///< same order as the input specs
    std::vector<TransmissionEvent> events;    ///< ordered by (start, device_id)

    std::uint64_t total_sent() const;
    std::uint64_t total_delivered() const;
    double network_pdr() const;
};

/// Offset within period `k` used for `device`: the explicit phase, or the
/// seeded draw.
double period_offset(const DeviceSpec& device, std::uint64_t seed, std::uint32_t k);

/// Simulates every attempt starting in [active_from, min(active_until, duration))
/// and resolves collisions per spreading factor. Single-threaded and
/// deterministic for a fixed seed. Throws ConfigError on invalid specs.
SimResult run(std::span<const DeviceSpec> devices, double duration, CollisionModel model, std::uint64_t seed);

/// One record per delivered event, ordered by receive time (= event end).
std::vector<PacketRecord> export_packet_log(const SimResult& result);

/// Human-readable event log; byte-identical for identical runs.
void write_event_log(std::ostream& out, const SimResult& result);

}  // namespace lorapdr::sim
