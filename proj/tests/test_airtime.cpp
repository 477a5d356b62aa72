#include <gtest/gtest.h>

#include "lorapdr/airtime.hpp"
#include "lorapdr/errors.hpp"
#include "oracles/airtime_oracle.hpp"

using namespace lorapdr::airtime;

TEST(Airtime, SymbolTime)
{
    EXPECT_DOUBLE_EQ(symbol_time(RadioConfig::lora(7)), 0.001024);
    EXPECT_DOUBLE_EQ(symbol_time(RadioConfig::lora(8)), 0.002048);
    EXPECT_DOUBLE_EQ(symbol_time(RadioConfig::lora(12)), 0.032768);
}

// Frozen from the datasheet oracle (100.25 and 90.25 symbols).
TEST(Airtime, FiftyOneBytePackets)
{
    EXPECT_NEAR(time_on_air(RadioConfig::lora(7), 51), 0.102656, 1e-12);
    EXPECT_NEAR(time_on_air(RadioConfig::lora(8), 51), 0.184832, 1e-12);
    EXPECT_NEAR(oracle::lora_time_on_air(7, 125000, 1, 8, false, true, false, 51), 0.102656, 1e-12);
}

TEST(Airtime, ShortPacketOfReferenceDeployment)
{
    // 9..12 byte payloads give 41.216 ms at SF7, the back-derived short packet.
    for (std::size_t payload = 9; payload <= 12; ++payload) {
        EXPECT_NEAR(time_on_air(RadioConfig::lora(7), payload), 0.041216, 1e-12) << payload;
    }
}

TEST(Airtime, EmptyPayloadStillHasHeaderSymbols)
{
    const auto config = RadioConfig::lora(7);
    const double preamble = (config.preamble_symbols + 4.25) * symbol_time(config);
    const double total = time_on_air(config, 0);
    EXPECT_GT(total, preamble);
    EXPECT_GE(total - preamble, 8 * symbol_time(config) - 1e-15);
}

TEST(Airtime, MatchesOracleOnFullGrid)
{
    for (int sf = 7; sf <= 12; ++sf) {
        for (int cr = 1; cr <= 4; ++cr) {
            for (int flags = 0; flags < 8; ++flags) {
                RadioConfig config = RadioConfig::lora(sf, 125000.0, cr);
                config.explicit_header = (flags & 1) == 0;
                config.crc_enabled = (flags & 2) != 0;
                config.low_data_rate_optimize = (flags & 4) != 0;
                for (int payload = 0; payload <= 255; ++payload) {
                    const double expected = oracle::lora_time_on_air(sf, 125000.0, cr, 8, !config.explicit_header,
                                                                     config.crc_enabled, config.low_data_rate_optimize,
                                                                     payload);
                    ASSERT_NEAR(time_on_air(config, static_cast<std::size_t>(payload)), expected, 1e-12)
                        << "sf=" << sf << " cr=" << cr << " flags=" << flags << " payload=" << payload;
                }
            }
        }
    }
}

TEST(Airtime, NonDecreasingInPayloadAndIncreasingInSf)
{
    for (int sf = 7; sf <= 12; ++sf) {
        const auto config = RadioConfig::lora(sf);
        for (std::size_t p = 0; p < kMaxPayloadBytes; ++p) {
            EXPECT_GE(time_on_air(config, p + 1), time_on_air(config, p));
        }
        if (sf < 12) {
            const auto next = RadioConfig::lora(sf + 1);
            for (std::size_t p = 0; p <= kMaxPayloadBytes; ++p) {
                EXPECT_GT(time_on_air(next, p), time_on_air(config, p)) << sf << " " << p;
            }
        }
    }
}

TEST(Airtime, DoublingBandwidthHalvesDuration)
{
    for (int sf = 7; sf <= 12; ++sf) {
        auto narrow = RadioConfig::lora(sf, 125000.0);
        auto wide = narrow;
        wide.bandwidth_hz = 250000.0;
        for (std::size_t p : {0, 1, 13, 51, 222, 255}) {
            EXPECT_NEAR(time_on_air(wide, p), time_on_air(narrow, p) / 2.0, 1e-15);
        }
    }
}

TEST(Airtime, LowDataRateOptimizeDefaults)
{
    EXPECT_FALSE(RadioConfig::lora(7).low_data_rate_optimize);
    EXPECT_FALSE(RadioConfig::lora(8).low_data_rate_optimize);
    EXPECT_TRUE(RadioConfig::lora(11).low_data_rate_optimize);
    EXPECT_TRUE(RadioConfig::lora(12).low_data_rate_optimize);
    EXPECT_FALSE(RadioConfig::lora(12, 500000.0).low_data_rate_optimize);
}

TEST(Airtime, Errors)
{
    EXPECT_THROW(time_on_air(RadioConfig::lora(7), 256), lorapdr::SizeError);
    EXPECT_THROW(RadioConfig::lora(6), lorapdr::ConfigError);
    EXPECT_THROW(RadioConfig::lora(13), lorapdr::ConfigError);
    EXPECT_THROW(RadioConfig::lora(7, 0.0), lorapdr::ConfigError);
    EXPECT_THROW(RadioConfig::lora(7, 125000.0, 5), lorapdr::ConfigError);
}
