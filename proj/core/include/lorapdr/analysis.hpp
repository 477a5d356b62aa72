#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lorapdr/controller.hpp"
#include "lorapdr/report.hpp"
#include "lorapdr/scaling.hpp"

namespace lorapdr::analysis {

/// Devices split between SF7 and SF8, with their (orthogonal) channels'
/// airtimes and a common transmit period.
struct SfMixConfig {
    std::int64_t n_sf7 = 0;
    std::int64_t n_sf8 = 0;
    double period = 600.0;
    double airtime_sf7 = 0.0;
    double airtime_sf8 = 0.0;

    std::int64_t total() const { return n_sf7 + n_sf8; }
    void validate() const;
};

/// Device-count-weighted average of the per-SF pure-ALOHA bounds.
scaling::SuccessBounds network_bounds(const SfMixConfig& mix);

struct BoundsPoint {
    std::int64_t n_moved = 0;  ///< devices moved from SF7 to SF8
    double lower = 1.0;
    double upper = 1.0;
};

struct BoundsCurve {
    std::vector<BoundsPoint> points;

    /// Index of the point with the largest lower bound (first on ties).
    std::size_t argmax_lower() const;
};

/// Sweeps n_moved = 0, step, 2*step, ... and always ends at total_devices.
BoundsCurve bounds_curve(std::int64_t total_devices, double period, double airtime_sf7, double airtime_sf8,
                         std::int64_t step);

struct DeviceCounts {
    std::int64_t n_sf7 = 0;
    std::int64_t n_sf8 = 0;

    friend bool operator==(const DeviceCounts&, const DeviceCounts&) = default;
};

/// Multiplies both counts by `ratio`, rounding to the nearest device.
DeviceCounts scale_mix(DeviceCounts mix, double ratio);
/// Divides both counts by `ratio`, rounding to the nearest device.
DeviceCounts unscale_mix(DeviceCounts mix, double ratio);

struct PdrSummary {
    double network_pdr = 0.0;     ///< sum delivered / sum sent
    double per_device_mean = 0.0; ///< mean ratio over devices with sent > 0
    std::uint64_t delivered = 0;
    std::uint64_t sent = 0;
};

/// Throws UndefinedPdrError when no device sent anything.
PdrSummary pdr_aggregate(std::span<const controller::DeviceReport> reports);
PdrSummary pdr_aggregate(std::span<const controller::ReportRow> rows);

/// Three binomial standard errors of a proportion p estimated from n trials.
double three_sigma(double p, std::uint64_t n);

}  // namespace lorapdr::analysis
