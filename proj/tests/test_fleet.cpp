#include <gtest/gtest.h>

#include "lorapdr/errors.hpp"
#include "lorapdr/fleet.hpp"
#include "support/scenario.hpp"

using namespace lorapdr;
using namespace lorapdr::controller;
using lorapdr::testing::Behaviour;
using lorapdr::testing::Scenario;

namespace {

Scenario plain(std::size_t n)
{
    Scenario s;
    s.devices.resize(n);
    return s;
}

}  // namespace

TEST(Fleet, OnlyActiveDevicesTransmit)
{
    netserver::PacketStore store;
    const auto s = plain(3);
    SimulatedFleet fleet(s.specs(), sim::CollisionModel::any_overlap(), 1, store);
    fleet.turn_on("d1", 0.0);
    fleet.turn_on("d2", 30.0);
    fleet.turn_off("d1", 70.0);
    fleet.publish(100.0);

    EXPECT_EQ(store.query("A0B1C2D3E4000001", 0, 1e9).size(), 10U);
    const auto d2 = store.query("A0B1C2D3E4000002", 0, 1e9);
    ASSERT_FALSE(d2.empty());
    EXPECT_GE(d2.front().received_ts, 30.0);
    EXPECT_TRUE(store.query("A0B1C2D3E4000003", 0, 1e9).empty());
    EXPECT_THROW(fleet.turn_on("d9", 0.0), ConfigError);
}

TEST(Fleet, PublishNeverLeaksFuturePackets)
{
    netserver::PacketStore store;
    const auto s = plain(2);
    SimulatedFleet fleet(s.specs(), sim::CollisionModel::any_overlap(), 1, store);
    SimClock clock(0.0);
    fleet.attach(clock);
    fleet.turn_on("d1", 0.0);
    for (int i = 1; i <= 20; ++i) {
        clock.wait_for(3.3);
        for (const auto& r : store.query("A0B1C2D3E4000001", 0, 1e9)) {
            EXPECT_LE(r.received_ts, clock.now());
        }
    }
}

TEST(Fleet, PublishedHistoryIsStable)
{
    // Publishing in many small steps gives the same store as one final step.
    std::mt19937_64 rng(4);
    const auto s = Scenario::random(rng, 12);
    netserver::PacketStore incremental;
    netserver::PacketStore once;
    Scenario crowded = s;
    crowded.airtime = 0.9;  // force collisions
    SimulatedFleet a(crowded.specs(), sim::CollisionModel::any_overlap(), 3, incremental);
    SimulatedFleet b(crowded.specs(), sim::CollisionModel::any_overlap(), 3, once);
    for (std::size_t i = 0; i < crowded.devices.size(); ++i) {
        const auto id = lorapdr::testing::scenario_id(i);
        a.turn_on(id, static_cast<double>(i));
        b.turn_on(id, static_cast<double>(i));
    }
    for (double t = 5.0; t <= 300.0; t += 5.0) {
        a.publish(t);
    }
    b.publish(300.0);
    EXPECT_EQ(incremental.size(), once.size());
    EXPECT_EQ(a.simulate(300.0).network_pdr(), b.simulate(300.0).network_pdr());
}

TEST(Fleet, MutedAndTriggeredDevices)
{
    netserver::PacketStore store;
    const auto s = plain(3);
    SimulatedFleet fleet(s.specs(), sim::CollisionModel::any_overlap(), 1, store);
    fleet.mute("d2");
    fleet.start_on_shutdown_of("d3", "d1");
    for (const char* id : {"d1", "d2", "d3"}) {
        fleet.turn_on(id, 0.0);
    }
    fleet.publish(50.0);
    EXPECT_TRUE(store.query("A0B1C2D3E4000002", 0, 1e9).empty());
    EXPECT_TRUE(store.query("A0B1C2D3E4000003", 0, 1e9).empty());
    fleet.turn_off("d1", 50.0);
    fleet.publish(100.0);
    EXPECT_TRUE(store.query("A0B1C2D3E4000002", 0, 1e9).empty());
    const auto d3 = store.query("A0B1C2D3E4000003", 0, 1e9);
    ASSERT_FALSE(d3.empty());
    EXPECT_GE(d3.front().received_ts, 50.0);
    EXPECT_THROW(fleet.start_on_shutdown_of("d3", "zz"), ConfigError);
}

TEST(FleetOperator, TogglesAndAdvances)
{
    netserver::PacketStore store;
    const auto s = plain(2);
    SimulatedFleet fleet(s.specs(), sim::CollisionModel::any_overlap(), 1, store);
    SimClock clock(10.0);
    fleet.attach(clock);
    ScriptedOperator replies(std::vector<std::string>{"skip", "confirm"});
    FleetOperator op(fleet, clock, 2.0, &replies);
    EXPECT_EQ(op.prompt({ActionKind::TurnOn, "d1"}), Reply::Skipped);
    EXPECT_EQ(op.prompt({ActionKind::TurnOn, "d2"}), Reply::Confirmed);
    EXPECT_DOUBLE_EQ(clock.now(), 14.0);
    clock.wait_for(70.0);
    EXPECT_TRUE(store.query("A0B1C2D3E4000001", 0, 1e9).empty());
    EXPECT_EQ(store.query("A0B1C2D3E4000002", 0, 1e9).size(), 10U);
}
