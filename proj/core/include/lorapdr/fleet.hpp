#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lorapdr/operator.hpp"
#include "lorapdr/simulator.hpp"
#include "lorapdr/store.hpp"

namespace lorapdr::controller {

/// Simulated stand-in for a physical fleet plus its base station.
///
/// Devices transmit only between their turn-on and turn-off times. Publishing
/// re-simulates the whole history with the current activity windows and
/// ingests every delivered packet that has finished by `now` into the store;
/// history never changes retroactively because a later toggle only affects
/// attempts that start after it. Faults can be injected: a muted device never
/// transmits, and a device tied to a trigger stays silent until the trigger
/// is turned off.
class SimulatedFleet {
public:
    /// The specs' active windows are ignored; operators set them.
    SimulatedFleet(std::vector<sim::DeviceSpec> devices, sim::CollisionModel model, std::uint64_t seed,
                   netserver::PacketStore& sink);

    void turn_on(const std::string& device_id, double t);
    void turn_off(const std::string& device_id, double t);

    void mute(const std::string& device_id);
    void start_on_shutdown_of(const std::string& device_id, const std::string& trigger_id);

    /// Ingests delivered packets with receive time <= now.
    void publish(double now);

    /// Publishes on every advance of `clock`.
    void attach(SimClock& clock);

    /// Ground-truth run over [0, horizon) with the current windows. Devices
    /// that never became active are absent.
    sim::SimResult simulate(double horizon) const;

    const std::vector<sim::DeviceSpec>& devices() const { return devices_; }

private:
    struct Activity {
        std::optional<double> on;
        std::optional<double> off;
        bool muted = false;
        std::optional<std::string> trigger;
    };

    std::size_t index(const std::string& device_id) const;

    std::vector<sim::DeviceSpec> devices_;
    std::vector<Activity> activity_;
    sim::CollisionModel model_;
    std::uint64_t seed_;
    netserver::PacketStore& sink_;
};

/// Operator for simulated runs: replies come from `replies` (auto-confirm when
/// null); each confirmed action toggles the fleet at the current time, and
/// every prompt then advances the clock by `step` seconds.
class FleetOperator : public OperatorInterface {
public:
    FleetOperator(SimulatedFleet& fleet, SimClock& clock, double step, OperatorInterface* replies = nullptr)
        : fleet_(fleet), clock_(clock), step_(step), replies_(replies)
    {
    }

    Reply prompt(const Action& action) override;

private:
    SimulatedFleet& fleet_;
    SimClock& clock_;
    double step_;
    OperatorInterface* replies_;
};

}  // namespace lorapdr::controller
