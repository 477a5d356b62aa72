#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorapdr/operator.hpp"
#include "lorapdr/packet.hpp"
#include "lorapdr/roster.hpp"

namespace lorapdr::controller {

struct DeviceFlags {
    bool turn_on_failed = false;
    bool never_responded = false;
    std::optional<std::string> responded_after_shutdown_of;
    std::optional<std::string> query_error;

    friend bool operator==(const DeviceFlags&, const DeviceFlags&) = default;
};

struct DeviceReport {
    std::string device_id;
    std::string dev_eui;
    std::uint64_t delivered = 0;
    std::uint64_t sent = 0;
    DeviceFlags flags;
};

struct PacketCounts {
    std::uint64_t delivered = 0;
    std::uint64_t sent = 0;

    friend bool operator==(const PacketCounts&, const PacketCounts&) = default;
};

/// Delivered/sent from one device's frame counters, in receive order.
///
/// A decrease in fcnt starts a new segment (counter reset). Each segment
/// contributes its distinct counter values as delivered and its span
/// max - min + 1 as sent.
PacketCounts compute_counts(std::span<const PacketRecord> packets);

struct TurnOnResult {
    std::vector<std::string> failed;
    double sequence_start = 0.0;
    double probe_end = 0.0;
};

/// Prompts TurnOn for every device in matrix order, waits `probe_window`, then
/// flags each device with no packets since the sequence started. Connectivity
/// errors propagate.
TurnOnResult turn_on_sequence(const DeviceMatrix& matrix, OperatorInterface& op, PacketSource& server,
                              Clock& clock, double probe_window);

struct DeviceCollection {
    RosterEntry device;
    std::vector<PacketRecord> packets;
    std::optional<std::string> error;
};

/// One query per device over the closed window [start_ts, end_ts], in matrix
/// order. A protocol error is recorded against that device only.
std::vector<DeviceCollection> collect(const DeviceMatrix& matrix, double start_ts, double end_ts,
                                      PacketSource& server);

enum class Priority { High, Middle, Low };

std::string_view to_string(Priority priority);

struct ShutdownEntry {
    std::string device_id;
    Priority queue = Priority::High;
    bool confirmed = true;
    double time = 0.0;
};

struct LateResponder {
    std::string device_id;
    std::string after;

    friend bool operator==(const LateResponder&, const LateResponder&) = default;
};

struct TurnOffResult {
    std::vector<ShutdownEntry> log;
    std::vector<LateResponder> late;
};

/// Three-priority shutdown.
///
/// High: devices that delivered during the experiment, in matrix order. After
/// every confirmed shutdown the clock advances by `recheck_window` and each
/// still-silent device is queried over that interval; a device that now has
/// packets joins the middle queue and is flagged as responding after that
/// shutdown. The middle queue runs once high is empty; the remaining silent
/// devices then form the low queue (late responders found during the low phase
/// are flagged but keep their place). A skipped prompt sends the device to the
/// back of its queue once; a second skip logs it as unconfirmed.
/// Updates the flags in `reports`.
TurnOffResult turn_off_sequence(const DeviceMatrix& matrix, std::span<DeviceReport> reports, OperatorInterface& op,
                                PacketSource& server, Clock& clock, double recheck_window);

struct ExperimentSettings {
    std::string name = "experiment";
    double duration = 0.0;
    double probe_window = 21.0;
    double recheck_window = 21.0;

    void validate() const;
};

struct ExperimentMeta {
    std::string name;
    double start = 0.0;
    double end = 0.0;
    double duration = 0.0;
};

struct ExperimentOutcome {
    ExperimentMeta meta;
    TurnOnResult turn_on;
    std::vector<DeviceCollection> collected;
    std::vector<DeviceReport> reports;
    TurnOffResult turn_off;
};

/// Builds the per-device reports from a collection and the turn-on failures.
std::vector<DeviceReport> build_reports(const std::vector<DeviceCollection>& collected,
                                        const std::vector<std::string>& turn_on_failed);

/// Turn-on, timed wait, collection, counting and turn-off, strictly in order.
ExperimentOutcome run_experiment(const DeviceMatrix& matrix, const ExperimentSettings& settings,
                                 OperatorInterface& op, PacketSource& server, Clock& clock);

}  // namespace lorapdr::controller
