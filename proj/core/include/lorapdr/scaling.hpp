#pragma once

#include <cstdint>

namespace lorapdr::scaling {

/// Offered traffic of a device population: N devices each sending one packet
/// of `airtime` seconds every `period` seconds.
struct TrafficProfile {
    std::int64_t num_devices = 1;
    double period = 1.0;
    double airtime = 0.0;

    double intensity() const { return 1.0 / period; }

    /// Throws ConfigError unless N >= 1 and 0 < airtime < period.
    void validate() const;
};

/// Dimensionless channel load N * t / T.
struct ChannelLoad {
    double load = 0.0;
};

struct SuccessBounds {
    double lower = 1.0;
    double upper = 1.0;
};

ChannelLoad channel_load(const TrafficProfile& profile);

/// Pure-ALOHA delivery probabilities: lower = exp(-2L) (any overlap destroys
/// both packets), upper = exp(-L) (only a full overlay destroys a packet).
SuccessBounds success_bounds(ChannelLoad load);

/// Exact no-collision probability (1 - 2t/T)^(N-1) for N periodic devices
/// with independent uniform phases. Throws ModelDomainError when 2t > T.
double success_exact_periodic(const TrafficProfile& profile);

/// Experiment profile carrying the same channel load as `real`, with the
/// device count rounded to the nearest integer. Throws InfeasibleError when
/// the rounded count is zero.
TrafficProfile derive_equivalent(const TrafficProfile& real, double experiment_period,
                                 double experiment_airtime);

/// Experiment devices per real device (N_e / N_p).
double device_ratio(const TrafficProfile& real, const TrafficProfile& experiment);

}  // namespace lorapdr::scaling
