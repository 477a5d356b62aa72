#include "lorapdr/fleet.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::controller {

SimulatedFleet::SimulatedFleet(std::vector<sim::DeviceSpec> devices, sim::CollisionModel model, std::uint64_t seed,
                               netserver::PacketStore& sink)
    : devices_(std::move(devices)), activity_(devices_.size()), model_(model), seed_(seed), sink_(sink)
{
    model_.validate();
}

std::size_t SimulatedFleet::index(const std::string& device_id) const
{
    for (std::size_t i = 0; i < devices_.size(); ++i) {
        if (devices_[i].device_id == device_id) {
            return i;
        }
    }
    throw ConfigError(fmt::format("device {} is not part of the simulated fleet", device_id));
}

void SimulatedFleet::turn_on(const std::string& device_id, double t)
{
    auto& a = activity_[index(device_id)];
    if (!a.on) {
        a.on = t;
    }
}

void SimulatedFleet::turn_off(const std::string& device_id, double t)
{
    auto& a = activity_[index(device_id)];
    if (!a.off) {
        a.off = t;
    }
}

void SimulatedFleet::mute(const std::string& device_id)
{
    activity_[index(device_id)].muted = true;
}

void SimulatedFleet::start_on_shutdown_of(const std::string& device_id, const std::string& trigger_id)
{
    index(trigger_id);
    activity_[index(device_id)].trigger = trigger_id;
}

sim::SimResult SimulatedFleet::simulate(double horizon) const
{
    std::vector<sim::DeviceSpec> active;
    for (std::size_t i = 0; i < devices_.size(); ++i) {
        const auto& a = activity_[i];
        if (!a.on || a.muted) {
            continue;
        }
        double from = *a.on;
        if (a.trigger) {
            const auto& trigger = activity_[index(*a.trigger)];
            if (!trigger.off) {
                continue;
            }
            from = std::max(from, *trigger.off);
        }
        const double until = a.off.value_or(std::numeric_limits<double>::infinity());
        if (!(from < until) || !(from < horizon)) {
            continue;
        }
        auto spec = devices_[i];
        spec.active_from = from;
        spec.active_until = until;
        active.push_back(std::move(spec));
    }
    if (active.empty() || !(horizon > 0.0)) {
        return {};
    }
    return sim::run(active, horizon, model_, seed_);
}

void SimulatedFleet::publish(double now)
{
    const auto result = simulate(now);
    auto records = sim::export_packet_log(result);
    std::erase_if(records, [now](const PacketRecord& r) { return r.received_ts > now; });
    sink_.ingest(records);
}

void SimulatedFleet::attach(SimClock& clock)
{
    clock.on_advance([this](double now) { publish(now); });
}

Reply FleetOperator::prompt(const Action& action)
{
    const Reply reply = replies_ != nullptr ? replies_->prompt(action) : Reply::Confirmed;
    if (reply == Reply::Confirmed) {
        if (action.kind == ActionKind::TurnOn) {
            fleet_.turn_on(action.device_id, clock_.now());
        } else {
            fleet_.turn_off(action.device_id, clock_.now());
        }
    }
    clock_.wait_for(step_);
    return reply;
}

}  // namespace lorapdr::controller
