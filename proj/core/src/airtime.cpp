#include "lorapdr/airtime.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::airtime {

RadioConfig RadioConfig::lora(int spreading_factor, double bandwidth_hz, int coding_rate_index)
{
    RadioConfig config;
    config.spreading_factor = spreading_factor;
    config.bandwidth_hz = bandwidth_hz;
    config.coding_rate_index = coding_rate_index;
    config.low_data_rate_optimize = recommended_low_data_rate_optimize(spreading_factor, bandwidth_hz);
    config.validate();
    return config;
}

void RadioConfig::validate() const
{
    if (spreading_factor < 7 || spreading_factor > 12) {
        throw ConfigError(fmt::format("spreading factor {} outside 7..12", spreading_factor));
    }
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw ConfigError(fmt::format("bandwidth {} Hz must be positive", bandwidth_hz));
    }
    if (coding_rate_index < 1 || coding_rate_index > 4) {
        throw ConfigError(fmt::format("coding rate index {} outside 1..4", coding_rate_index));
    }
    if (preamble_symbols < 1) {
        throw ConfigError(fmt::format("preamble length {} must be positive", preamble_symbols));
    }
}

bool recommended_low_data_rate_optimize(int spreading_factor, double bandwidth_hz)
{
    return std::ldexp(1.0, spreading_factor) / bandwidth_hz > 0.016;
}

double symbol_time(const RadioConfig& config)
{
    config.validate();
    return std::ldexp(1.0, config.spreading_factor) / config.bandwidth_hz;
}

int payload_symbols(const RadioConfig& config, std::size_t payload_bytes)
{
    config.validate();
    if (payload_bytes > kMaxPayloadBytes) {
        throw SizeError(fmt::format("payload of {} bytes exceeds {} bytes", payload_bytes, kMaxPayloadBytes));
    }
    const int sf = config.spreading_factor;
    const int bits = 8 * static_cast<int>(payload_bytes) - 4 * sf + 28 + (config.crc_enabled ? 16 : 0) -
                     (config.explicit_header ? 0 : 20);
    const int bits_per_block = 4 * (sf - (config.low_data_rate_optimize ? 2 : 0));
    // ceil for positive numerators, clamped at zero blocks
    const int blocks = bits > 0 ? (bits + bits_per_block - 1) / bits_per_block : 0;
    return 8 + std::max(blocks, 0) * (config.coding_rate_index + 4);
}

double time_on_air(const RadioConfig& config, std::size_t payload_bytes)
{
    const int symbols = payload_symbols(config, payload_bytes);
    const double t_sym = symbol_time(config);
    return (config.preamble_symbols + 4.25) * t_sym + symbols * t_sym;
}

}  // namespace lorapdr::airtime
