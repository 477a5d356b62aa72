#include "lorapdr/scaling.hpp"

#include <cmath>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::scaling {

void TrafficProfile::validate() const
{
    if (num_devices < 1) {
        throw ConfigError(fmt::format("device count {} must be at least 1", num_devices));
    }
    if (!(period > 0.0)) {
        throw ConfigError(fmt::format("period {} must be positive", period));
    }
    if (!(airtime > 0.0) || !(airtime < period)) {
        throw ConfigError(fmt::format("airtime {} must lie in (0, period={})", airtime, period));
    }
}

ChannelLoad channel_load(const TrafficProfile& profile)
{
    profile.validate();
    return ChannelLoad{static_cast<double>(profile.num_devices) * profile.airtime / profile.period};
}

SuccessBounds success_bounds(ChannelLoad load)
{
    if (!(load.load >= 0.0)) {
        throw ModelDomainError(fmt::format("channel load {} must be non-negative", load.load));
    }
    return SuccessBounds{std::exp(-2.0 * load.load), std::exp(-load.load)};
}

double success_exact_periodic(const TrafficProfile& profile)
{
    profile.validate();
    const double busy = 2.0 * profile.airtime / profile.period;
    if (busy > 1.0) {
        throw ModelDomainError(
            fmt::format("vulnerability window 2t={} exceeds period {}", 2.0 * profile.airtime, profile.period));
    }
    const auto interferers = static_cast<double>(profile.num_devices - 1);
    if (interferers == 0.0) {
        return 1.0;
    }
    return std::exp(interferers * std::log1p(-busy));
}

TrafficProfile derive_equivalent(const TrafficProfile& real, double experiment_period, double experiment_airtime)
{
    if (!(experiment_airtime > 0.0) || !(experiment_period > experiment_airtime)) {
        throw ConfigError(fmt::format("experiment needs period > airtime > 0 (got period {}, airtime {})",
                                      experiment_period, experiment_airtime));
    }
    const double load = channel_load(real).load;
    const double exact_devices = load * experiment_period / experiment_airtime;
    const double rounded = std::round(exact_devices);
    if (rounded < 1.0) {
        throw InfeasibleError(fmt::format(
            "load {} with period {} s and airtime {} s needs {} devices, fewer than one", load,
            experiment_period, experiment_airtime, exact_devices));
    }
    TrafficProfile experiment{static_cast<std::int64_t>(rounded), experiment_period, experiment_airtime};
    experiment.validate();
    return experiment;
}

double device_ratio(const TrafficProfile& real, const TrafficProfile& experiment)
{
    return static_cast<double>(experiment.num_devices) / static_cast<double>(real.num_devices);
}

}  // namespace lorapdr::scaling
