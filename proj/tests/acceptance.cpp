// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Set LORAPDR_UPDATE_GOLDEN=1 to rewrite the end-to-end
// golden report instead of comparing against it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

#include "lorapdr/airtime.hpp"
#include "lorapdr/analysis.hpp"
#include "lorapdr/client.hpp"
#include "lorapdr/controller.hpp"
#include "lorapdr/errors.hpp"
#include "lorapdr/packet_log.hpp"
#include "lorapdr/protocol.hpp"
#include "lorapdr/report.hpp"
#include "lorapdr/roster.hpp"
#include "lorapdr/scaling.hpp"
#include "lorapdr/server.hpp"
#include "lorapdr/simulator.hpp"
#include "lorapdr_cli/cli.hpp"
#include "support/scenario.hpp"

namespace fs = std::filesystem;
using namespace lorapdr;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Collects failure reasons; the first few are shown.
struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            failures.push_back(what);
        }
    }

    Verdict verdict(const std::string& summary) const
    {
        if (failures.empty()) {
            return {true, summary};
        }
        std::string detail = fmt::format("{} failure(s): {}", failures.size(), failures.front());
        for (std::size_t i = 1; i < std::min<std::size_t>(failures.size(), 3); ++i) {
            detail += "; " + failures[i];
        }
        return {false, detail};
    }
};

double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::vector<sim::DeviceSpec> periodic_fleet(std::int64_t n7, std::int64_t n8, double period, double t7, double t8)
{
    std::vector<sim::DeviceSpec> out;
    for (std::int64_t i = 0; i < n7 + n8; ++i) {
        sim::DeviceSpec d;
        d.device_id = fmt::format("d{}", i + 1);
        d.dev_eui = fmt::format("70B3D57ED0{:06X}", i + 1);
        d.sf = i < n7 ? 7 : 8;
        d.period = period;
        d.airtime = i < n7 ? t7 : t8;
        out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------- 1

Verdict scaling_reproduction()
{
    const auto t0 = std::chrono::steady_clock::now();
    const scaling::TrafficProfile real{10000, 600.0, 0.04122};
    const auto experiment = scaling::derive_equivalent(real, 7.0, 0.11729);
    const double per_1000 = 1000.0 * scaling::device_ratio(real, experiment);
    Check c;
    c.expect(std::abs(scaling::channel_load(real).load - 0.687) < 1e-9, "real load is not 0.687");
    c.expect(experiment.num_devices == 41, fmt::format("N_e = {}", experiment.num_devices));
    c.expect(fmt::format("{:.1f}", per_1000) == "4.1", fmt::format("ratio {:.3f}/1000", per_1000));
    return c.verdict(fmt::format("N_e = {}, ratio {:.1f} per 1000 ({:.2f} ms)", experiment.num_devices, per_1000,
                                 elapsed_ms(t0)));
}

// ---------------------------------------------------------------- 2

Verdict oracle_equivalence()
{
    const double T = 7.0;
    const double t = 0.11729;
    Check c;
    std::string summary;
    double slowest = 0.0;
    for (std::int64_t n : {2, 5, 41}) {
        const auto devices = periodic_fleet(n, 0, T, t, 2 * t);
        for (const bool window : {false, true}) {
            const auto model = window ? sim::CollisionModel::vulnerability_window(1.0) : sim::CollisionModel::any_overlap();
            const auto t0 = std::chrono::steady_clock::now();
            const auto result = sim::run(devices, 10000 * T, model, 1000 + static_cast<std::uint64_t>(n));
            slowest = std::max(slowest, elapsed_ms(t0));
            const double expected = std::pow(1.0 - (window ? 1.0 : 2.0) * t / T, static_cast<double>(n - 1));
            const double tol = analysis::three_sigma(expected, result.total_sent());
            const double pdr = result.network_pdr();
            const auto tag = fmt::format("N={} {}", n, window ? "window(1)" : "any");
            c.expect(result.total_sent() >= static_cast<std::uint64_t>(n) * 10000, tag + " fewer than 10000 periods");
            c.expect(std::abs(pdr - expected) <= tol,
                     fmt::format("{} pdr {:.5f} vs {:.5f} +- {:.5f}", tag, pdr, expected, tol));
            if (n == 41) {
                summary += fmt::format("{} pdr {:.4f} vs {:.4f} +- {:.4f}; ", tag, pdr, expected, tol);
            }
        }
    }
    c.expect(slowest < 60000.0, "a point took longer than a minute");
    return c.verdict(summary + fmt::format("slowest point {:.0f} ms", slowest));
}

// ---------------------------------------------------------------- 3

Verdict bounds_sandwich()
{
    std::mt19937_64 rng(314159);
    std::uniform_int_distribution<std::int64_t> devices(2, 50);
    std::uniform_real_distribution<double> load(0.05, 0.75);
    std::uniform_real_distribution<double> period(1.0, 600.0);
    Check c;
    double worst_margin = 1.0;
    for (int i = 0; i < 20; ++i) {
        const auto n = devices(rng);
        const double L = load(rng);
        const double T = period(rng);
        const double t = L * T / static_cast<double>(n);
        const auto result = sim::run(periodic_fleet(n, 0, T, t, 2 * t), 10000 * T, sim::CollisionModel::any_overlap(),
                                     rng());
        const auto bounds = scaling::success_bounds({L});
        const double pdr = result.network_pdr();
        const double tol = analysis::three_sigma(pdr, result.total_sent());
        worst_margin = std::min({worst_margin, pdr - bounds.lower + tol, bounds.upper + tol - pdr});
        c.expect(bounds.lower - tol <= pdr && pdr <= bounds.upper + tol,
                 fmt::format("N={} L={:.3f}: {:.4f} outside [{:.4f}, {:.4f}]", n, L, pdr, bounds.lower, bounds.upper));
    }
    return c.verdict(fmt::format("20 profiles, N in [2,50], L in [0.05,0.75], smallest margin {:.4f}", worst_margin));
}

// ---------------------------------------------------------------- 4

// Six devices with explicit phases and slightly different periods, so two
// pairs drift into and out of collision inside the experiment window while
// the window edges stay clear.
std::vector<sim::DeviceSpec> pipeline_fixture()
{
    struct Row {
        double period;
        double phase;
    };
    const Row rows[] = {{7.00, 1.5}, {7.01, 0.0}, {6.99, 1.0}, {7.02, 3.0}, {6.98, 4.2}, {7.00, 5.5}};
    std::vector<sim::DeviceSpec> out;
    for (std::size_t i = 0; i < std::size(rows); ++i) {
        sim::DeviceSpec d;
        d.device_id = fmt::format("d{}", i + 1);
        d.dev_eui = cli::simulated_eui(i + 1);
        d.period = rows[i].period;
        d.phase = rows[i].phase;
        d.airtime = 0.3;
        out.push_back(d);
    }
    return out;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict pipeline_exactness()
{
    Check c;
    const auto dir = fs::temp_directory_path() / fmt::format("lorapdr-acceptance-{}", ::getpid());
    fs::create_directories(dir);

    const auto specs = pipeline_fixture();
    const auto truth = sim::run(specs, 1000.0, sim::CollisionModel::any_overlap(), 1);
    packet_log::write_file((dir / "packets.log").string(), sim::export_packet_log(truth));
    {
        std::ofstream mapping(dir / "mapping.csv");
        std::ofstream roster(dir / "roster.txt");
        for (const auto& d : specs) {
            mapping << d.device_id << ',' << d.dev_eui << '\n';
            roster << d.device_id << '\n';
        }
    }

    auto store = std::shared_ptr<netserver::PacketStore>(netserver::PacketStore::open((dir / "server.log").string()));
    {
        std::ifstream log(dir / "packets.log");
        store->ingest_stream(log);
    }
    netserver::Server server(store, "acceptance-token");
    server.start("127.0.0.1:0");

    std::istringstream no_input;
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run({"run-experiment", "--roster", (dir / "roster.txt").string(), "--mapping",
                               (dir / "mapping.csv").string(), "--duration", "700", "--server", server.address(),
                               "--token", "acceptance-token", "--auto-operator", "sim", "--clock", "sim", "--start",
                               "0", "--name", "pipeline", "--report", (dir / "report.txt").string(), "--timestamps",
                               (dir / "timestamps.txt").string()},
                              no_input, out, err);
    server.stop();
    if (code != 0) {
        return {false, "run-experiment failed: " + err.str()};
    }

    const auto report = controller::read_report((dir / "report.txt").string());
    const double from = report.meta.start;
    const double to = report.meta.end;
    std::vector<std::uint64_t> sent(specs.size());
    std::vector<std::uint64_t> delivered(specs.size());
    std::uint64_t lost = 0;
    for (const auto& e : truth.events) {
        if (from <= e.end && e.end <= to) {
            ++sent[e.device];
            delivered[e.device] += e.delivered ? 1 : 0;
            lost += e.delivered ? 0 : 1;
        }
    }
    c.expect(report.rows.size() == specs.size(), "report row count");
    for (std::size_t i = 0; i < std::min(report.rows.size(), specs.size()); ++i) {
        const auto& row = report.rows[i];
        c.expect(row.device_id == specs[i].device_id, "row order");
        c.expect(row.delivered == delivered[i] && row.sent == sent[i],
                 fmt::format("{}: report {}/{} truth {}/{}", row.device_id, row.delivered, row.sent, delivered[i],
                             sent[i]));
    }
    c.expect(lost > 0, "fixture produced no collisions in the window");

    const fs::path golden = fs::path(LORAPDR_TEST_DATA_DIR) / "golden" / "pipeline_report.txt";
    const auto produced = slurp(dir / "report.txt");
    if (const char* update = std::getenv("LORAPDR_UPDATE_GOLDEN"); update != nullptr && std::string(update) == "1") {
        std::ofstream(golden, std::ios::binary) << produced;
    }
    c.expect(fs::exists(golden) && slurp(golden) == produced, "report differs from golden fixture " + golden.string());
    fs::remove_all(dir);
    return c.verdict(fmt::format("{} devices, window [{:.0f}, {:.0f}], {} collisions, report matches golden",
                                 specs.size(), from, to, lost));
}

// ---------------------------------------------------------------- 5

Verdict counter_gaps()
{
    const auto counts = [](std::initializer_list<std::uint32_t> fcnts) {
        std::vector<PacketRecord> packets;
        double ts = 0.0;
        for (auto f : fcnts) {
            packets.push_back({"0000000000000001", f, ts += 1.0, 7});
        }
        return controller::compute_counts(packets);
    };
    Check c;
    c.expect(counts({0, 1, 2, 3}) == controller::PacketCounts{4, 4}, "[0,1,2,3]");
    c.expect(counts({5, 6, 9, 10}) == controller::PacketCounts{4, 6}, "[5,6,9,10]");
    c.expect(counts({10, 11, 0, 1}) == controller::PacketCounts{4, 4}, "[10,11,0,1]");
    return c.verdict("(4,4) (4,6) (4,4)");
}

// ---------------------------------------------------------------- 6

Verdict turn_off_ordering()
{
    using namespace controller;
    std::mt19937_64 rng(6);
    Check c;
    int trials = 0;
    std::size_t middles = 0;
    for (; trials < 40; ++trials) {
        const auto scenario = lorapdr::testing::Scenario::random(rng, 2 + rng() % 14);
        lorapdr::testing::ScenarioRig rig(scenario, 1000.0 * trials, rng());
        FleetOperator op(rig.fleet, rig.clock, scenario.period);
        ExperimentSettings settings;
        settings.duration = 70.0;
        const auto matrix = scenario.matrix();
        const auto outcome = run_experiment(matrix, settings, op, rig.store, rig.clock);
        const auto& log = outcome.turn_off.log;

        std::multiset<std::string> seen;
        std::map<std::string, std::size_t> position;
        for (std::size_t i = 0; i < log.size(); ++i) {
            seen.insert(log[i].device_id);
            position[log[i].device_id] = i;
            if (i > 0 && static_cast<int>(log[i - 1].queue) > static_cast<int>(log[i].queue)) {
                c.expect(false, fmt::format("trial {}: {} after {}", trials, to_string(log[i].queue),
                                            to_string(log[i - 1].queue)));
            }
        }
        std::multiset<std::string> roster;
        for (const auto& e : matrix) {
            roster.insert(e.device_id);
        }
        c.expect(seen == roster, fmt::format("trial {}: log is not a roster permutation", trials));
        for (std::size_t i = 0; i < log.size(); ++i) {
            if (log[i].queue != Priority::Middle) {
                continue;
            }
            ++middles;
            const auto& report = outcome.reports[*matrix.index_of(log[i].device_id)];
            const auto& after = report.flags.responded_after_shutdown_of;
            c.expect(after.has_value() && position.contains(*after) && position[*after] < i,
                     fmt::format("trial {}: middle device {} lacks an earlier shutdown flag", trials, log[i].device_id));
        }
    }
    c.expect(middles > 0, "no middle-queue devices were exercised");
    return c.verdict(fmt::format("{} randomized fleets, {} middle-queue shutdowns", trials, middles));
}

// ---------------------------------------------------------------- 7

Verdict sf_mix()
{
    Check c;
    const double T = 600.0;
    const double t7 = 0.04122;
    const double ratio = airtime::time_on_air(airtime::RadioConfig::lora(8), 10) /
                         airtime::time_on_air(airtime::RadioConfig::lora(7), 10);
    const double t8 = t7 * ratio;
    const auto curve = analysis::bounds_curve(8835, T, t7, t8, 1);
    const auto best = curve.argmax_lower();
    c.expect(best > 0 && best + 1 < curve.points.size(), "lower-bound maximum sits on an endpoint");
    c.expect(curve.points[best].lower > curve.points.front().lower, "no improvement over all-SF7");

    // Experiment side: 36-device scale, 7 s period, airtimes stretched so the
    // per-SF loads match the real mixes.
    const double scale = 8835.0 / 36.0;
    const double Te = 7.0;
    const double t7e = t7 * scale * Te / T;
    const double t8e = t8 * scale * Te / T;
    const std::vector<analysis::DeviceCounts> mixes{{36, 0}, {31, 5}, {22, 7}, {14, 14}, {7, 22}};
    std::string points;
    for (const auto& mix : mixes) {
        const auto real = analysis::scale_mix(mix, scale);
        const auto band = analysis::network_bounds({real.n_sf7, real.n_sf8, T, t7, t8});
        const auto result = sim::run(periodic_fleet(mix.n_sf7, mix.n_sf8, Te, t7e, t8e), 10000 * Te,
                                     sim::CollisionModel::any_overlap(), 77 + static_cast<std::uint64_t>(mix.n_sf8));
        const double pdr = result.network_pdr();
        const double tol = analysis::three_sigma(pdr, result.total_sent());
        c.expect(band.lower - tol <= pdr && pdr <= band.upper + tol,
                 fmt::format("mix ({},{}) pdr {:.4f} outside [{:.4f}, {:.4f}]", mix.n_sf7, mix.n_sf8, pdr, band.lower,
                             band.upper));
        points += fmt::format(" ({},{})={:.3f}", mix.n_sf7, mix.n_sf8, pdr);
    }
    return c.verdict(fmt::format("t8/t7 {:.3f}, best lower {:.4f} at {} moved vs {:.4f} all-SF7; points{}", ratio,
                                 curve.points[best].lower, curve.points[best].n_moved, curve.points.front().lower,
                                 points));
}

// ---------------------------------------------------------------- 8

Verdict table_consistency()
{
    Check c;
    const double ratio = 8835.0 / 36.0;
    struct Pair {
        analysis::DeviceCounts experiment;
        analysis::DeviceCounts real;
    };
    const Pair pairs[] = {{{36, 0}, {8835, 0}}, {{31, 5}, {7608, 1227}}};
    for (const auto& p : pairs) {
        const auto up = analysis::scale_mix(p.experiment, ratio);
        const auto down = analysis::unscale_mix(p.real, ratio);
        c.expect(std::llabs(up.n_sf7 - p.real.n_sf7) <= 1 && std::llabs(up.n_sf8 - p.real.n_sf8) <= 1,
                 fmt::format("({},{}) -> ({},{})", p.experiment.n_sf7, p.experiment.n_sf8, up.n_sf7, up.n_sf8));
        c.expect(std::llabs(down.n_sf7 - p.experiment.n_sf7) <= 1 && std::llabs(down.n_sf8 - p.experiment.n_sf8) <= 1,
                 fmt::format("({},{}) <- ({},{})", down.n_sf7, down.n_sf8, p.real.n_sf7, p.real.n_sf8));
    }
    const auto mixed = analysis::scale_mix({31, 5}, ratio);
    return c.verdict(fmt::format("(36,0)<->(8835,0), (31,5)<->({},{})", mixed.n_sf7, mixed.n_sf8));
}

// ---------------------------------------------------------------- 9

protocol::Message random_message(std::mt19937_64& rng)
{
    const auto text = [&] {
        static const std::vector<std::string> pieces{"a", "Z", "9", " ", "\"", "\\", "\n", "\t", "\xc3\xa9", "{"};
        std::string s;
        for (auto n = rng() % 10; n > 0; --n) {
            s += pieces[rng() % pieces.size()];
        }
        return s;
    };
    const auto number = [&] { return std::ldexp(static_cast<double>(rng() >> 11), -static_cast<int>(rng() % 60)); };
    switch (rng() % 6) {
    case 0: return protocol::AuthRequest{text()};
    case 1: return protocol::AuthOk{};
    case 2: return protocol::AuthFail{text()};
    case 3: return protocol::QueryRequest{text(), number(), number()};
    case 4: {
        protocol::PacketsResponse r{text(), {}};
        for (auto n = rng() % 6; n > 0; --n) {
            r.packets.push_back({static_cast<std::uint32_t>(rng()), number(), 7 + static_cast<int>(rng() % 6)});
        }
        return r;
    }
    default: return protocol::ErrorMessage{text()};
    }
}

Verdict protocol_conformance()
{
    Check c;
    std::mt19937_64 rng(9);
    std::vector<std::string> euis;
    for (int i = 0; i < 10; ++i) {
        euis.push_back(fmt::format("00112233445566{:02X}", i));
    }
    std::vector<PacketRecord> records;
    for (int i = 0; i < 1000; ++i) {
        records.push_back({euis[rng() % euis.size()], static_cast<std::uint32_t>(rng() % 1000),
                           static_cast<double>(rng() % 100000) / 100.0, 7 + static_cast<int>(rng() % 2)});
    }
    auto store = std::make_shared<netserver::PacketStore>();
    store->ingest(records);
    netserver::Server server(store, "t0k");
    server.start("127.0.0.1:0");

    // Nothing is answered before auth, and the connection is closed.
    {
        auto raw = netserver::Client::connect(server.address());
        const auto reply = protocol::parse(
            raw.exchange_raw(protocol::serialize(protocol::QueryRequest{euis[0], 0.0, 1e9})));
        c.expect(std::holds_alternative<protocol::ErrorMessage>(reply), "query before auth was answered");
        bool closed = false;
        try {
            raw.read_line();
        } catch (const ConnectivityError&) {
            closed = true;
        }
        c.expect(closed, "connection stayed open after unauthenticated query");
    }
    {
        auto bad = netserver::Client::connect(server.address());
        bool refused = false;
        try {
            bad.authenticate("wrong");
        } catch (const ProtocolError&) {
            refused = true;
        }
        c.expect(refused, "wrong token accepted");
    }

    auto client = netserver::Client::connect(server.address());
    client.authenticate("t0k");
    int queries = 0;
    for (; queries < 300; ++queries) {
        const auto& eui = euis[rng() % euis.size()];
        double a = static_cast<double>(rng() % 100000) / 100.0;
        double b = static_cast<double>(rng() % 100000) / 100.0;
        if (a > b) {
            std::swap(a, b);
        }
        std::set<std::pair<double, std::uint32_t>> expected;
        for (const auto& r : records) {
            if (r.dev_eui == eui && a <= r.received_ts && r.received_ts <= b) {
                expected.insert({r.received_ts, r.fcnt});
            }
        }
        const auto got = client.query(eui, a, b);
        std::vector<std::pair<double, std::uint32_t>> got_keys;
        for (const auto& r : got) {
            got_keys.emplace_back(r.received_ts, r.fcnt);
        }
        c.expect(std::vector(expected.begin(), expected.end()) == got_keys,
                 fmt::format("query {} [{}, {}] differs from linear scan", eui, a, b));
    }
    server.stop();

    int round_trips = 0;
    for (; round_trips < 5000; ++round_trips) {
        const auto m = random_message(rng);
        const auto line = protocol::serialize(m);
        c.expect(line.find('\n') == std::string::npos && protocol::parse(line) == m, "round trip changed a message");
    }
    return c.verdict(fmt::format("auth enforced, {} windowed queries over 1000 records, {} round trips", queries,
                                 round_trips));
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"scaling reproduction", scaling_reproduction},
        {"oracle equivalence", oracle_equivalence},
        {"bounds sandwich", bounds_sandwich},
        {"end-to-end pipeline exactness", pipeline_exactness},
        {"counter-gap arithmetic", counter_gaps},
        {"turn-off ordering", turn_off_ordering},
        {"SF-mix qualitative reproduction", sf_mix},
        {"table consistency", table_consistency},
        {"protocol conformance", protocol_conformance},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, fmt::format("threw: {}", e.what())};
        }
        failed += v.pass ? 0 : 1;
        std::cout << fmt::format("{} criterion {}: {}: {}\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                                 v.detail)
                  << std::flush;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
