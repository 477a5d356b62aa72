#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lorapdr/errors.hpp"
#include "lorapdr/scaling.hpp"

using namespace lorapdr::scaling;

namespace {

const TrafficProfile kReal{10000, 600.0, 0.04122};

}  // namespace

TEST(Scaling, ChannelLoadOfReferenceDeployment)
{
    EXPECT_NEAR(channel_load(kReal).load, 0.687, 1e-12);
    EXPECT_NEAR(channel_load({41, 7.0, 0.11729}).load, 0.687, 1e-4);
    EXPECT_LT(channel_load({1, 600.0, 1e-9}).load, 1e-11);
}

TEST(Scaling, SuccessBounds)
{
    const auto empty = success_bounds({0.0});
    EXPECT_DOUBLE_EQ(empty.lower, 1.0);
    EXPECT_DOUBLE_EQ(empty.upper, 1.0);

    const auto b = success_bounds({0.687});
    EXPECT_NEAR(b.lower, 0.2531, 5e-5);
    EXPECT_NEAR(b.upper, 0.5031, 5e-5);

    const auto half = success_bounds({0.3435});
    EXPECT_NEAR(half.lower, std::sqrt(b.lower), 1e-15);

    EXPECT_THROW(success_bounds({-0.1}), lorapdr::ModelDomainError);
}

TEST(Scaling, ExactPeriodic)
{
    EXPECT_DOUBLE_EQ(success_exact_periodic({1, 7.0, 0.11729}), 1.0);
    // (1 - 2*0.11729/7)^40
    EXPECT_NEAR(success_exact_periodic({41, 7.0, 0.11729}), 0.2557, 2e-4);
    EXPECT_NEAR(success_exact_periodic(kReal), std::exp(-2.0 * 0.687), 1e-3);
    EXPECT_THROW(success_exact_periodic({3, 1.0, 0.6}), lorapdr::ModelDomainError);
}

TEST(Scaling, DeriveEquivalentReproducesReferenceExperiment)
{
    const auto experiment = derive_equivalent(kReal, 7.0, 0.11729);
    EXPECT_EQ(experiment.num_devices, 41);
    EXPECT_NEAR(1000.0 * device_ratio(kReal, experiment), 4.1, 1e-12);

    const auto same = derive_equivalent(kReal, kReal.period, kReal.airtime);
    EXPECT_EQ(same.num_devices, kReal.num_devices);
}

TEST(Scaling, DeriveEquivalentErrors)
{
    EXPECT_THROW(derive_equivalent(kReal, 7.0, 7.5), lorapdr::ConfigError);
    EXPECT_THROW(derive_equivalent(kReal, 7.0, 0.0), lorapdr::ConfigError);
    EXPECT_THROW(derive_equivalent({1, 600.0, 0.01}, 7.0, 6.0), lorapdr::InfeasibleError);
}

TEST(Scaling, ProfileValidation)
{
    EXPECT_THROW(channel_load({0, 7.0, 0.1}), lorapdr::ConfigError);
    EXPECT_THROW(channel_load({1, 0.0, 0.1}), lorapdr::ConfigError);
    EXPECT_THROW(channel_load({1, 1.0, 1.0}), lorapdr::ConfigError);
}

// lower bound (L from N) <= exact <= upper bound (L from N-1) on loads up to
// 0.9; the lower side stops holding for loads above ~1 with many devices.
TEST(ScalingProperty, ExactLiesBetweenBounds)
{
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::int64_t> devices(2, 5000);
    std::uniform_real_distribution<double> period(1.0, 3600.0);
    std::uniform_real_distribution<double> load(0.0, 0.79);
    for (int i = 0; i < 5000; ++i) {
        const auto n = devices(rng);
        const double T = period(rng);
        const double L = load(rng);
        const double t = L * T / static_cast<double>(n);
        if (!(t > 0.0) || 2.0 * t > T) {
            continue;
        }
        const TrafficProfile profile{n, T, t};
        const double exact = success_exact_periodic(profile);
        const auto bounds_n = success_bounds(channel_load(profile));
        const auto bounds_n1 = success_bounds({static_cast<double>(n - 1) * t / T});
        ASSERT_LE(bounds_n.lower, exact + 1e-15) << n << " " << T << " " << t;
        ASSERT_LE(exact, bounds_n1.upper + 1e-15) << n << " " << T << " " << t;
        ASSERT_LE(exact, bounds_n.upper);
        ASSERT_LE(bounds_n.lower, bounds_n.upper);
    }
}

TEST(ScalingProperty, LowerBoundFailsForTinyFleetsAtHighLoad)
{
    // With two devices the exact law is 1 - L, which drops under exp(-2L)
    // once L passes about 0.797.
    const TrafficProfile two{2, 7.0, 0.45 * 7.0};
    EXPECT_LT(success_exact_periodic(two), success_bounds(channel_load(two)).lower);
    const TrafficProfile ok{2, 7.0, 0.39 * 7.0};
    EXPECT_GT(success_exact_periodic(ok), success_bounds(channel_load(ok)).lower);
}

TEST(ScalingProperty, ExactIsMonotone)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> devices(2, 500);
    std::uniform_real_distribution<double> period(5.0, 600.0);
    std::uniform_real_distribution<double> fraction(0.0001, 0.2);
    for (int i = 0; i < 2000; ++i) {
        const auto n = devices(rng);
        const double T = period(rng);
        const double t = fraction(rng) * T;
        const double base = success_exact_periodic({n, T, t});
        EXPECT_LT(success_exact_periodic({n + 1, T, t}), base);
        EXPECT_LT(success_exact_periodic({n, T, t * 1.01}), base);
        EXPECT_GT(success_exact_periodic({n, T * 1.01, t}), base);
    }
}

TEST(ScalingProperty, DeriveEquivalentRoundsOnly)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> devices(1, 100000);
    std::uniform_real_distribution<double> real_period(60.0, 3600.0);
    std::uniform_real_distribution<double> airtime(0.01, 0.4);
    std::uniform_real_distribution<double> exp_period(2.0, 60.0);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
        const TrafficProfile real{devices(rng), real_period(rng), airtime(rng)};
        const double te = airtime(rng);
        const double Te = exp_period(rng);
        TrafficProfile experiment;
        try {
            experiment = derive_equivalent(real, Te, te);
        } catch (const lorapdr::InfeasibleError&) {
            EXPECT_LT(channel_load(real).load * Te / te, 0.5);
            continue;
        } catch (const lorapdr::ConfigError&) {
            continue;  // load too high for te < Te
        }
        const double L = channel_load(real).load;
        const double Le = channel_load(experiment).load;
        ASSERT_LE(std::abs(Le - L) / Le, 1.0 / (2.0 * static_cast<double>(experiment.num_devices)) + 1e-12);
        ++checked;
    }
    EXPECT_GT(checked, 1000);
}
