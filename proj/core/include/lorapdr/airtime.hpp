#pragma once

#include <cstddef>

namespace lorapdr::airtime {

inline constexpr std::size_t kMaxPayloadBytes = 255;

/// LoRa modulation settings that determine time-on-air.
///
/// `coding_rate_index` n selects the code rate 4/(4+n). Use `RadioConfig::lora`
/// to get the usual LoRaWAN uplink defaults with the low-data-rate-optimize
/// flag chosen by symbol time.
struct RadioConfig {
    int spreading_factor = 7;
    double bandwidth_hz = 125000.0;
    int coding_rate_index = 1;
    int preamble_symbols = 8;
    bool explicit_header = true;
    bool crc_enabled = true;
    bool low_data_rate_optimize = false;

    static RadioConfig lora(int spreading_factor, double bandwidth_hz = 125000.0,
                            int coding_rate_index = 1);

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// True when the symbol time exceeds 16 ms (SF11/SF12 at 125 kHz).
bool recommended_low_data_rate_optimize(int spreading_factor, double bandwidth_hz);

double symbol_time(const RadioConfig& config);

/// Number of payload symbols including the 8 fixed header symbols.
int payload_symbols(const RadioConfig& config, std::size_t payload_bytes);

/// Preamble plus payload duration in seconds. Throws SizeError above 255 bytes.
double time_on_air(const RadioConfig& config, std::size_t payload_bytes);

}  // namespace lorapdr::airtime
