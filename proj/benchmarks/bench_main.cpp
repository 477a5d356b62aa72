#include <random>

#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include "lorapdr/airtime.hpp"
#include "lorapdr/controller.hpp"
#include "lorapdr/simulator.hpp"
#include "lorapdr/store.hpp"

using namespace lorapdr;

namespace {

std::vector<sim::DeviceSpec> fleet(std::int64_t n)
{
    std::vector<sim::DeviceSpec> out;
    for (std::int64_t i = 0; i < n; ++i) {
        sim::DeviceSpec d;
        d.device_id = fmt::format("d{}", i);
        d.dev_eui = fmt::format("70B3D57ED0{:06X}", i);
        d.period = 7.0;
        d.airtime = 0.11729;
        out.push_back(d);
    }
    return out;
}

void BM_TimeOnAir(benchmark::State& state)
{
    const auto config = airtime::RadioConfig::lora(static_cast<int>(state.range(0)));
    std::size_t payload = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(airtime::time_on_air(config, payload));
        payload = (payload + 1) % 256;
    }
}
BENCHMARK(BM_TimeOnAir)->Arg(7)->Arg(12);

void BM_SimulateAnyOverlap(benchmark::State& state)
{
    const auto devices = fleet(state.range(0));
    for (auto _ : state) {
        auto result = sim::run(devices, 7.0 * 1000, sim::CollisionModel::any_overlap(), 1);
        benchmark::DoNotOptimize(result.events.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_SimulateAnyOverlap)->Arg(41)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SimulateWindow(benchmark::State& state)
{
    const auto devices = fleet(state.range(0));
    for (auto _ : state) {
        auto result = sim::run(devices, 7.0 * 1000, sim::CollisionModel::vulnerability_window(1.0), 1);
        benchmark::DoNotOptimize(result.events.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_SimulateWindow)->Arg(41)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_StoreQuery(benchmark::State& state)
{
    netserver::PacketStore store;
    const auto result = sim::run(fleet(41), 7.0 * 10000, sim::CollisionModel::any_overlap(), 1);
    store.ingest(sim::export_packet_log(result));
    std::mt19937_64 rng(1);
    for (auto _ : state) {
        const double from = static_cast<double>(rng() % 60000);
        auto got = store.query(fmt::format("70B3D57ED0{:06X}", rng() % 41), from, from + 3600.0);
        benchmark::DoNotOptimize(got.data());
    }
}
BENCHMARK(BM_StoreQuery);

void BM_ComputeCounts(benchmark::State& state)
{
    std::vector<PacketRecord> packets;
    for (std::uint32_t i = 0; i < 10000; ++i) {
        if (i % 4 != 0) {
            packets.push_back({"0000000000000001", i, static_cast<double>(i), 7});
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(controller::compute_counts(packets));
    }
}
BENCHMARK(BM_ComputeCounts);

}  // namespace

BENCHMARK_MAIN();
