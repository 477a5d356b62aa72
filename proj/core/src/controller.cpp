#include "lorapdr/controller.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::controller {

PacketCounts compute_counts(std::span<const PacketRecord> packets)
{
    PacketCounts counts;
    std::size_t i = 0;
    while (i < packets.size()) {
        std::set<std::uint32_t> seen{packets[i].fcnt};
        std::uint32_t low = packets[i].fcnt;
        std::uint32_t high = packets[i].fcnt;
        std::size_t j = i + 1;
        for (; j < packets.size() && packets[j].fcnt >= packets[j - 1].fcnt; ++j) {
            seen.insert(packets[j].fcnt);
            high = packets[j].fcnt;
        }
        counts.delivered += seen.size();
        counts.sent += static_cast<std::uint64_t>(high - low) + 1;
        i = j;
    }
    return counts;
}

TurnOnResult turn_on_sequence(const DeviceMatrix& matrix, OperatorInterface& op, PacketSource& server, Clock& clock,
                              double probe_window)
{
    if (!(probe_window > 0.0)) {
        throw ConfigError(fmt::format("probe window {} must be positive", probe_window));
    }
    TurnOnResult result;
    result.sequence_start = clock.now();
    for (const auto& entry : matrix) {
        // A skip is not recorded directly; the probe below decides.
        op.prompt(Action{ActionKind::TurnOn, entry.device_id});
    }
    clock.wait_for(probe_window);
    result.probe_end = clock.now();
    for (const auto& entry : matrix) {
        if (server.query(entry.dev_eui, result.sequence_start, result.probe_end).empty()) {
            result.failed.push_back(entry.device_id);
        }
    }
    return result;
}

std::vector<DeviceCollection> collect(const DeviceMatrix& matrix, double start_ts, double end_ts,
                                      PacketSource& server)
{
    if (!(end_ts > start_ts)) {
        throw ConfigError(fmt::format("collection window [{}, {}] is empty", start_ts, end_ts));
    }
    std::vector<DeviceCollection> out;
    out.reserve(matrix.size());
    for (const auto& entry : matrix) {
        DeviceCollection collection{entry, {}, std::nullopt};
        try {
            collection.packets = server.query(entry.dev_eui, start_ts, end_ts);
        } catch (const ProtocolError& e) {
            collection.error = e.what();
        }
        out.push_back(std::move(collection));
    }
    return out;
}

std::string_view to_string(Priority priority)
{
    switch (priority) {
    case Priority::High:
        return "high";
    case Priority::Middle:
        return "middle";
    case Priority::Low:
        return "low";
    }
    return "?";
}

TurnOffResult turn_off_sequence(const DeviceMatrix& matrix, std::span<DeviceReport> reports, OperatorInterface& op,
                                PacketSource& server, Clock& clock, double recheck_window)
{
    if (!(recheck_window > 0.0)) {
        throw ConfigError(fmt::format("recheck window {} must be positive", recheck_window));
    }
    std::unordered_map<std::string, DeviceReport*> by_id;
    for (auto& report : reports) {
        by_id[report.device_id] = &report;
    }

    std::deque<std::string> high;
    std::deque<std::string> middle;
    std::deque<std::string> low;
    std::vector<std::string> silent;  // not yet responded, matrix order
    for (const auto& entry : matrix) {
        const auto it = by_id.find(entry.device_id);
        if (it != by_id.end() && it->second->delivered > 0) {
            high.push_back(entry.device_id);
        } else {
            silent.push_back(entry.device_id);
        }
    }

    TurnOffResult result;
    std::unordered_set<std::string> skipped_once;
    bool low_phase = false;

    while (true) {
        std::deque<std::string>* queue = nullptr;
        Priority priority = Priority::High;
        if (!high.empty()) {
            queue = &high;
        } else if (!middle.empty()) {
            queue = &middle;
            priority = Priority::Middle;
        } else {
            if (!low_phase) {
                low_phase = true;
                low.assign(silent.begin(), silent.end());
            }
            if (low.empty()) {
                break;
            }
            queue = &low;
            priority = Priority::Low;
        }

        const std::string device = queue->front();
        queue->pop_front();
        const auto reply = op.prompt(Action{ActionKind::TurnOff, device});
        const double shutdown_time = clock.now();
        if (reply == Reply::Skipped) {
            if (skipped_once.insert(device).second) {
                queue->push_back(device);
            } else {
                result.log.push_back(ShutdownEntry{device, priority, false, shutdown_time});
                std::erase(silent, device);
            }
            continue;
        }
        result.log.push_back(ShutdownEntry{device, priority, true, shutdown_time});
        std::erase(silent, device);

        if (silent.empty()) {
            continue;
        }
        clock.wait_for(recheck_window);
        const double recheck_end = clock.now();
        std::vector<std::string> responders;
        for (const auto& candidate : silent) {
            std::vector<PacketRecord> packets;
            try {
                packets = server.query(matrix.eui_of(candidate), shutdown_time, recheck_end);
            } catch (const ProtocolError&) {
                continue;
            }
            if (!packets.empty()) {
                responders.push_back(candidate);
            }
        }
        for (const auto& responder : responders) {
            result.late.push_back(LateResponder{responder, device});
            if (auto it = by_id.find(responder); it != by_id.end()) {
                it->second->flags.responded_after_shutdown_of = device;
            }
            std::erase(silent, responder);
            if (!low_phase) {
                middle.push_back(responder);
            }
        }
    }

    for (auto& report : reports) {
        report.flags.never_responded = report.delivered == 0 && !report.flags.responded_after_shutdown_of;
    }
    return result;
}

void ExperimentSettings::validate() const
{
    if (!(duration > 0.0)) {
        throw ConfigError(fmt::format("experiment duration {} must be positive", duration));
    }
    if (!(probe_window > 0.0) || !(recheck_window > 0.0)) {
        throw ConfigError("probe and recheck windows must be positive");
    }
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
        throw ConfigError(fmt::format("experiment name '{}' must be a single non-empty word", name));
    }
}

std::vector<DeviceReport> build_reports(const std::vector<DeviceCollection>& collected,
                                        const std::vector<std::string>& turn_on_failed)
{
    const std::unordered_set<std::string> failed(turn_on_failed.begin(), turn_on_failed.end());
    std::vector<DeviceReport> reports;
    reports.reserve(collected.size());
    for (const auto& c : collected) {
        const auto counts = compute_counts(c.packets);
        DeviceReport report{c.device.device_id, c.device.dev_eui, counts.delivered, counts.sent, {}};
        report.flags.turn_on_failed = failed.contains(c.device.device_id);
        report.flags.query_error = c.error;
        reports.push_back(std::move(report));
    }
    return reports;
}

ExperimentOutcome run_experiment(const DeviceMatrix& matrix, const ExperimentSettings& settings,
                                 OperatorInterface& op, PacketSource& server, Clock& clock)
{
    settings.validate();
    ExperimentOutcome outcome;
    outcome.turn_on = turn_on_sequence(matrix, op, server, clock, settings.probe_window);

    outcome.meta.name = settings.name;
    outcome.meta.start = clock.now();
    outcome.meta.end = outcome.meta.start + settings.duration;
    outcome.meta.duration = settings.duration;
    clock.wait_until(outcome.meta.end);

    outcome.collected = collect(matrix, outcome.meta.start, outcome.meta.end, server);
    outcome.reports = build_reports(outcome.collected, outcome.turn_on.failed);
    outcome.turn_off = turn_off_sequence(matrix, outcome.reports, op, server, clock, settings.recheck_window);
    return outcome;
}

}  // namespace lorapdr::controller
