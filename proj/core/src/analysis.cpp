#include "lorapdr/analysis.hpp"

#include <cmath>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::analysis {

void SfMixConfig::validate() const
{
    if (n_sf7 < 0 || n_sf8 < 0 || total() < 1) {
        throw ConfigError(fmt::format("SF mix ({}, {}) needs at least one device", n_sf7, n_sf8));
    }
    if (!(period > 0.0) || !(airtime_sf7 > 0.0) || !(airtime_sf8 > airtime_sf7)) {
        throw ConfigError(fmt::format("SF mix needs period > 0 and 0 < t7 ({}) < t8 ({})", airtime_sf7, airtime_sf8));
    }
}

scaling::SuccessBounds network_bounds(const SfMixConfig& mix)
{
    mix.validate();
    const double n7 = static_cast<double>(mix.n_sf7);
    const double n8 = static_cast<double>(mix.n_sf8);
    const auto b7 = scaling::success_bounds({n7 * mix.airtime_sf7 / mix.period});
    const auto b8 = scaling::success_bounds({n8 * mix.airtime_sf8 / mix.period});
    const double n = n7 + n8;
    return {(n7 * b7.lower + n8 * b8.lower) / n, (n7 * b7.upper + n8 * b8.upper) / n};
}

std::size_t BoundsCurve::argmax_lower() const
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].lower > points[best].lower) {
            best = i;
        }
    }
    return best;
}

BoundsCurve bounds_curve(std::int64_t total_devices, double period, double airtime_sf7, double airtime_sf8,
                         std::int64_t step)
{
    if (step < 1) {
        throw ConfigError(fmt::format("sweep step {} must be at least 1", step));
    }
    if (total_devices < 1) {
        throw ConfigError("sweep needs at least one device");
    }
    BoundsCurve curve;
    for (std::int64_t moved = 0;; moved += step) {
        moved = std::min(moved, total_devices);
        const auto bounds =
            network_bounds(SfMixConfig{total_devices - moved, moved, period, airtime_sf7, airtime_sf8});
        curve.points.push_back(BoundsPoint{moved, bounds.lower, bounds.upper});
        if (moved == total_devices) {
            break;
        }
    }
    return curve;
}

DeviceCounts scale_mix(DeviceCounts mix, double ratio)
{
    if (!(ratio > 0.0)) {
        throw ConfigError(fmt::format("scaling ratio {} must be positive", ratio));
    }
    return {std::llround(static_cast<double>(mix.n_sf7) * ratio), std::llround(static_cast<double>(mix.n_sf8) * ratio)};
}

DeviceCounts unscale_mix(DeviceCounts mix, double ratio)
{
    if (!(ratio > 0.0)) {
        throw ConfigError(fmt::format("scaling ratio {} must be positive", ratio));
    }
    return {std::llround(static_cast<double>(mix.n_sf7) / ratio), std::llround(static_cast<double>(mix.n_sf8) / ratio)};
}

namespace {

template <typename Rows>
PdrSummary aggregate(const Rows& rows)
{
    PdrSummary summary;
    double ratio_sum = 0.0;
    std::size_t counted = 0;
    for (const auto& row : rows) {
        summary.delivered += row.delivered;
        summary.sent += row.sent;
        if (row.sent > 0) {
            ratio_sum += static_cast<double>(row.delivered) / static_cast<double>(row.sent);
            ++counted;
        }
    }
    if (summary.sent == 0) {
        throw UndefinedPdrError("no device sent any packet; PDR is undefined");
    }
    summary.network_pdr = static_cast<double>(summary.delivered) / static_cast<double>(summary.sent);
    summary.per_device_mean = ratio_sum / static_cast<double>(counted);
    return summary;
}

}  // namespace

PdrSummary pdr_aggregate(std::span<const controller::DeviceReport> reports)
{
    return aggregate(reports);
}

PdrSummary pdr_aggregate(std::span<const controller::ReportRow> rows)
{
    return aggregate(rows);
}

double three_sigma(double p, std::uint64_t n)
{
    if (n == 0) {
        return INFINITY;
    }
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace lorapdr::analysis
