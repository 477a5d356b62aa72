#include "lorapdr_cli/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lorapdr/airtime.hpp"
#include "lorapdr/analysis.hpp"
#include "lorapdr/client.hpp"
#include "lorapdr/controller.hpp"
#include "lorapdr/errors.hpp"
#include "lorapdr/fleet.hpp"
#include "lorapdr/packet_log.hpp"
#include "lorapdr/report.hpp"
#include "lorapdr/roster.hpp"
#include "lorapdr/scaling.hpp"
#include "lorapdr/server.hpp"
#include "lorapdr/simulator.hpp"

namespace lorapdr::cli {

namespace {

std::atomic<bool> g_stop{false};

// Payload whose SF7 airtime (41.216 ms) matches the short packet of the
// reference deployment; used to derive SF8 airtimes when none is given.
constexpr std::size_t kReferencePayload = 10;

double sf8_over_sf7_ratio(std::size_t payload)
{
    return airtime::time_on_air(airtime::RadioConfig::lora(8), payload) /
           airtime::time_on_air(airtime::RadioConfig::lora(7), payload);
}

sim::CollisionModel parse_model(const std::string& name, double factor)
{
    if (name == "any") {
        return sim::CollisionModel::any_overlap();
    }
    if (name == "window") {
        return sim::CollisionModel::vulnerability_window(factor);
    }
    throw ConfigError(fmt::format("unknown collision model '{}' (any|window)", name));
}

/// Exact per-device success for N periodic devices under `model`.
double expected_periodic(std::int64_t n, double period, double airtime, const sim::CollisionModel& model)
{
    const double window = model.kind == sim::CollisionModel::Kind::AnyOverlap ? 2.0 : model.factor;
    return std::pow(1.0 - window * airtime / period, static_cast<double>(n - 1));
}

template <typename Fn>
void with_output_file(const std::string& path, Fn&& fn)
{
    std::ofstream file(path, std::ios::trunc);
    if (!file) {
        throw IoError(fmt::format("cannot write {}", path));
    }
    fn(file);
    if (!file) {
        throw IoError(fmt::format("writing {} failed", path));
    }
}

// ---------------------------------------------------------------- airtime

struct AirtimeOptions {
    int sf = 7;
    double bandwidth = 125000.0;
    std::size_t payload = 0;
    int cr = 5;
    int preamble = 8;
    bool implicit_header = false;
    bool no_crc = false;
    std::string ldro = "auto";
};

void add_airtime(CLI::App& app, AirtimeOptions& o)
{
    app.add_option("--sf", o.sf, "Spreading factor (7-12)")->check(CLI::Range(7, 12));
    app.add_option("--bw", o.bandwidth, "Bandwidth in Hz");
    app.add_option("--payload", o.payload, "Payload size in bytes")->required();
    app.add_option("--cr", o.cr, "Coding rate denominator, 5..8 for 4/5..4/8")->check(CLI::Range(5, 8));
    app.add_option("--preamble", o.preamble, "Preamble symbols");
    app.add_flag("--implicit-header", o.implicit_header, "Implicit header mode");
    app.add_flag("--no-crc", o.no_crc, "Disable payload CRC");
    app.add_option("--ldro", o.ldro, "Low data rate optimize: auto|on|off")
        ->check(CLI::IsMember({"auto", "on", "off"}));
}

int run_airtime(const AirtimeOptions& o, std::ostream& out)
{
    auto config = airtime::RadioConfig::lora(o.sf, o.bandwidth, o.cr - 4);
    config.preamble_symbols = o.preamble;
    config.explicit_header = !o.implicit_header;
    config.crc_enabled = !o.no_crc;
    if (o.ldro != "auto") {
        config.low_data_rate_optimize = o.ldro == "on";
    }
    out << fmt::format("time_on_air {:.6f}\n", airtime::time_on_air(config, o.payload));
    out << fmt::format("symbol_time {:.6f}\n", airtime::symbol_time(config));
    out << fmt::format("payload_symbols {}\n", airtime::payload_symbols(config, o.payload));
    return 0;
}

// ---------------------------------------------------------------- scale

struct ScaleOptions {
    std::int64_t real_n = 10000;
    double real_period = 600.0;
    double real_airtime = 0.04122;
    double exp_period = 7.0;
    double exp_airtime = 0.11729;
};

void add_scale(CLI::App& app, ScaleOptions& o)
{
    app.add_option("--real-n", o.real_n, "Devices in the real deployment")->required();
    app.add_option("--real-period", o.real_period, "Transmit period of real devices (s)")->required();
    app.add_option("--real-airtime", o.real_airtime, "Short-packet airtime (s)")->required();
    app.add_option("--exp-period", o.exp_period, "Experiment transmit period (s)")->required();
    app.add_option("--exp-airtime", o.exp_airtime, "Experiment long-packet airtime (s)")->required();
}

int run_scale(const ScaleOptions& o, std::ostream& out)
{
    const scaling::TrafficProfile real{o.real_n, o.real_period, o.real_airtime};
    const auto experiment = scaling::derive_equivalent(real, o.exp_period, o.exp_airtime);
    const double real_load = scaling::channel_load(real).load;
    const double exp_load = scaling::channel_load(experiment).load;
    const auto bounds = scaling::success_bounds({real_load});
    out << fmt::format("real_load {:.6f}\n", real_load);
    out << fmt::format("N_e = {}\n", experiment.num_devices);
    out << fmt::format("experiment_load {:.6f}\n", exp_load);
    out << fmt::format("device_ratio_per_1000 {:.1f}\n", 1000.0 * scaling::device_ratio(real, experiment));
    out << fmt::format("bounds lower {:.4f} upper {:.4f}\n", bounds.lower, bounds.upper);
    out << fmt::format("exact_periodic_experiment {:.4f}\n", scaling::success_exact_periodic(experiment));
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::int64_t devices = 1;
    std::int64_t sf8_devices = 0;
    double period = 7.0;
    double airtime = 0.11729;
    std::optional<double> airtime_sf8;
    int sf = 7;
    double duration = 0.0;
    std::uint64_t seed = 1;
    std::string model = "any";
    double window_factor = 1.0;
    std::string packet_log;
    std::string event_log;
    std::string mapping_out;
    std::string roster_out;
};

void add_simulate(CLI::App& app, SimulateOptions& o)
{
    app.add_option("--devices", o.devices, "Number of devices")->required()->check(CLI::PositiveNumber);
    app.add_option("--sf8-devices", o.sf8_devices, "How many of the devices use SF8 instead of --sf");
    app.add_option("--period", o.period, "Transmit period (s)");
    app.add_option("--airtime", o.airtime, "Packet airtime at --sf (s)");
    app.add_option("--airtime-sf8", o.airtime_sf8, "Airtime of SF8 devices (default: airtime-formula ratio)");
    app.add_option("--sf", o.sf, "Spreading factor of the devices")->check(CLI::Range(7, 12));
    app.add_option("--duration", o.duration, "Simulated time (s)")->required();
    app.add_option("--seed", o.seed, "Random seed for device phases");
    app.add_option("--model", o.model, "Collision model: any|window")->check(CLI::IsMember({"any", "window"}));
    app.add_option("--window-factor", o.window_factor, "Vulnerability window in airtimes (window model)");
    app.add_option("--packet-log", o.packet_log, "Write delivered packets in packet-log format");
    app.add_option("--event-log", o.event_log, "Write every transmission attempt");
    app.add_option("--mapping-out", o.mapping_out, "Write the id,eui mapping table");
    app.add_option("--roster-out", o.roster_out, "Write the experiment device list");
}

std::vector<sim::DeviceSpec> make_devices(std::int64_t count, std::int64_t sf8_count, int sf, double period,
                                          double airtime, double airtime_sf8)
{
    if (sf8_count < 0 || sf8_count > count) {
        throw ConfigError(fmt::format("--sf8-devices {} outside 0..{}", sf8_count, count));
    }
    std::vector<sim::DeviceSpec> devices;
    for (std::int64_t i = 1; i <= count; ++i) {
        const bool on_sf8 = i > count - sf8_count;
        sim::DeviceSpec spec;
        spec.device_id = fmt::format("d{}", i);
        spec.dev_eui = simulated_eui(static_cast<std::size_t>(i));
        spec.sf = on_sf8 ? 8 : sf;
        spec.period = period;
        spec.airtime = on_sf8 ? airtime_sf8 : airtime;
        devices.push_back(std::move(spec));
    }
    return devices;
}

int run_simulate(const SimulateOptions& o, std::ostream& out)
{
    const auto model = parse_model(o.model, o.window_factor);
    const double airtime_sf8 = o.airtime_sf8.value_or(o.airtime * sf8_over_sf7_ratio(kReferencePayload));
    const auto devices = make_devices(o.devices, o.sf8_devices, o.sf, o.period, o.airtime, airtime_sf8);
    const auto result = sim::run(devices, o.duration, model, o.seed);

    if (!o.packet_log.empty()) {
        packet_log::write_file(o.packet_log, sim::export_packet_log(result));
    }
    if (!o.event_log.empty()) {
        with_output_file(o.event_log, [&](std::ostream& f) { sim::write_event_log(f, result); });
    }
    if (!o.mapping_out.empty()) {
        with_output_file(o.mapping_out, [&](std::ostream& f) {
            for (const auto& d : devices) {
                f << d.device_id << ',' << normalize_eui(d.dev_eui) << '\n';
            }
        });
    }
    if (!o.roster_out.empty()) {
        with_output_file(o.roster_out, [&](std::ostream& f) {
            for (const auto& d : devices) {
                f << d.device_id << '\n';
            }
        });
    }

    const auto n7 = o.devices - o.sf8_devices;
    double expected = 0.0;
    if (n7 > 0) {
        expected += static_cast<double>(n7) * expected_periodic(n7, o.period, o.airtime, model);
    }
    if (o.sf8_devices > 0) {
        expected += static_cast<double>(o.sf8_devices) * expected_periodic(o.sf8_devices, o.period, airtime_sf8, model);
    }
    expected /= static_cast<double>(o.devices);

    out << fmt::format("devices {} sent {} delivered {}\n", o.devices, result.total_sent(), result.total_delivered());
    out << fmt::format("pdr {:.6f}\n", result.network_pdr());
    out << fmt::format("expected_periodic {:.6f}\n", expected);
    out << fmt::format("three_sigma {:.6f}\n", analysis::three_sigma(expected, result.total_sent()));
    return 0;
}

// ---------------------------------------------------------------- serve

struct ServeOptions {
    std::string bind = "127.0.0.1:7000";
    std::string token;
    std::string log;
    std::vector<std::string> ingest;
};

void add_serve(CLI::App& app, ServeOptions& o)
{
    app.add_option("--bind", o.bind, "Listen address host:port (port 0 picks one)");
    app.add_option("--token", o.token, "Shared authentication token")->required();
    app.add_option("--log", o.log, "Append-only packet log, replayed at startup")->required();
    app.add_option("--ingest", o.ingest, "Packet-log files to add before serving");
}

int run_serve(const ServeOptions& o, std::ostream& out, std::ostream& err)
{
    std::shared_ptr<netserver::PacketStore> store = netserver::PacketStore::open(o.log);
    out << fmt::format("replayed {} records from {}\n", store->size(), o.log);
    for (const auto& path : o.ingest) {
        std::ifstream in(path);
        if (!in) {
            throw IoError(fmt::format("cannot open {}", path));
        }
        const auto stats = store->ingest_stream(in);
        out << fmt::format("ingested {} from {} ({} duplicate, {} malformed)\n", stats.ingested, path,
                           stats.duplicates, stats.malformed);
        if (stats.malformed > 0) {
            err << fmt::format("warning: skipped {} malformed lines in {}\n", stats.malformed, path);
        }
    }
    netserver::Server server(store, o.token);
    server.start(o.bind);
    out << fmt::format("listening on {}\n", server.address()) << std::flush;
    g_stop = false;
    while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    out << "stopped\n";
    return 0;
}

// ---------------------------------------------------------------- run-experiment

/// Lets simulated operator time pass after each prompt when the devices are
/// not driven by an in-process fleet.
class TimedOperator : public controller::OperatorInterface {
public:
    TimedOperator(controller::OperatorInterface& inner, controller::SimClock& clock, double step)
        : inner_(inner), clock_(clock), step_(step)
    {
    }

    controller::Reply prompt(const controller::Action& action) override
    {
        const auto reply = inner_.prompt(action);
        clock_.wait_for(step_);
        return reply;
    }

private:
    controller::OperatorInterface& inner_;
    controller::SimClock& clock_;
    double step_;
};

struct ExperimentOptions {
    std::string roster;
    std::string mapping;
    double duration = 0.0;
    std::string server;
    std::string token;
    std::string auto_operator;
    std::string name = "experiment";
    std::string report = "report.txt";
    std::string timestamps = "timestamps.txt";
    double device_period = 7.0;
    std::optional<double> probe_window;
    std::optional<double> recheck_window;
    double operator_step = 1.0;
    double start = 0.0;
    std::string clock;
    std::string transcript_out;
    double sim_airtime = 0.11729;
    std::uint64_t seed = 1;
};

void add_experiment(CLI::App& app, ExperimentOptions& o)
{
    app.add_option("--roster", o.roster, "Experiment table: device ids, one per line")->required();
    app.add_option("--mapping", o.mapping, "Mapping table: id,eui per line")->required();
    app.add_option("--duration", o.duration, "Experiment duration (s)")->required();
    app.add_option("--server", o.server, "Network server host:port, or 'local' for an in-process simulated fleet")
        ->required();
    app.add_option("--token", o.token, "Server authentication token");
    app.add_option("--auto-operator", o.auto_operator, "Reply transcript to replay, or 'sim' to auto-confirm");
    app.add_option("--name", o.name, "Experiment name for the report header");
    app.add_option("--report", o.report, "Main report file");
    app.add_option("--timestamps", o.timestamps, "Packet timestamp file");
    app.add_option("--device-period", o.device_period, "Device transmit period (s); sets default windows");
    app.add_option("--probe-window", o.probe_window, "Turn-on probe window (s), default 3 periods");
    app.add_option("--recheck-window", o.recheck_window, "Turn-off recheck window (s), default 3 periods");
    app.add_option("--operator-step", o.operator_step, "Simulated seconds per operator action");
    app.add_option("--start", o.start, "Simulated clock start time (s)");
    app.add_option("--clock", o.clock, "sim|system (default: sim with --auto-operator, else system)")
        ->check(CLI::IsMember({"sim", "system"}));
    app.add_option("--transcript-out", o.transcript_out, "Record operator replies for scripted replay");
    app.add_option("--sim-airtime", o.sim_airtime, "Airtime of simulated devices with --server local (s)");
    app.add_option("--seed", o.seed, "Seed of the simulated fleet with --server local");
}

int run_experiment_cmd(const ExperimentOptions& o, std::istream& in, std::ostream& out)
{
    using namespace controller;
    const auto matrix = load_roster(o.roster, o.mapping);

    ExperimentSettings settings;
    settings.name = o.name;
    settings.duration = o.duration;
    settings.probe_window = o.probe_window.value_or(3.0 * o.device_period);
    settings.recheck_window = o.recheck_window.value_or(3.0 * o.device_period);
    settings.validate();

    const bool local = o.server == "local";
    const std::string clock_kind = !o.clock.empty() ? o.clock : (o.auto_operator.empty() && !local ? "system" : "sim");
    if (local && clock_kind != "sim") {
        throw ConfigError("--server local needs the simulated clock");
    }

    std::unique_ptr<Clock> clock;
    SimClock* sim_clock = nullptr;
    if (clock_kind == "sim") {
        auto owned = std::make_unique<SimClock>(o.start);
        sim_clock = owned.get();
        clock = std::move(owned);
    } else {
        clock = std::make_unique<SystemClock>();
    }

    // Reply source.
    std::unique_ptr<OperatorInterface> replies;
    std::ifstream script;
    if (o.auto_operator.empty()) {
        replies = std::make_unique<TerminalOperator>(in, out);
    } else if (o.auto_operator == "sim") {
        replies = std::make_unique<AutoOperator>();
    } else {
        script.open(o.auto_operator);
        if (!script) {
            throw IoError(fmt::format("cannot open operator script {}", o.auto_operator));
        }
        replies = std::make_unique<ScriptedOperator>(script);
    }

    std::ofstream transcript;
    std::unique_ptr<OperatorInterface> recorder;
    OperatorInterface* op = replies.get();
    if (!o.transcript_out.empty()) {
        transcript.open(o.transcript_out, std::ios::trunc);
        if (!transcript) {
            throw IoError(fmt::format("cannot write transcript {}", o.transcript_out));
        }
        recorder = std::make_unique<RecordingOperator>(*replies, transcript);
        op = recorder.get();
    }

    std::unique_ptr<netserver::PacketStore> local_store;
    std::unique_ptr<SimulatedFleet> fleet;
    std::unique_ptr<FleetOperator> fleet_operator;
    std::unique_ptr<TimedOperator> timed_operator;
    std::optional<netserver::Client> client;
    PacketSource* source = nullptr;

    if (local) {
        std::vector<sim::DeviceSpec> specs;
        for (const auto& entry : matrix) {
            sim::DeviceSpec spec;
            spec.device_id = entry.device_id;
            spec.dev_eui = entry.dev_eui;
            spec.period = o.device_period;
            spec.airtime = o.sim_airtime;
            specs.push_back(std::move(spec));
        }
        local_store = std::make_unique<netserver::PacketStore>();
        fleet = std::make_unique<SimulatedFleet>(std::move(specs), sim::CollisionModel::any_overlap(), o.seed,
                                                 *local_store);
        fleet->attach(*sim_clock);
        fleet_operator = std::make_unique<FleetOperator>(*fleet, *sim_clock, o.operator_step, op);
        op = fleet_operator.get();
        source = local_store.get();
    } else {
        if (o.token.empty()) {
            throw ConfigError("--token is required with a network server");
        }
        client.emplace(netserver::Client::connect(o.server));
        client->authenticate(o.token);
        source = &*client;
        if (sim_clock != nullptr) {
            timed_operator = std::make_unique<TimedOperator>(*op, *sim_clock, o.operator_step);
            op = timed_operator.get();
        }
    }

    const auto outcome = run_experiment(matrix, settings, *op, *source, *clock);
    write_output(outcome, o.report, o.timestamps);

    out << fmt::format("experiment {} start {:.6f} end {:.6f}\n", outcome.meta.name, outcome.meta.start,
                       outcome.meta.end);
    out << fmt::format("turn-on failures {}\n", outcome.turn_on.failed.size());
    out << fmt::format("late responders {}\n", outcome.turn_off.late.size());
    try {
        const auto summary = analysis::pdr_aggregate(std::span<const DeviceReport>(outcome.reports));
        out << fmt::format("network_pdr {:.6f} ({} / {})\n", summary.network_pdr, summary.delivered, summary.sent);
    } catch (const UndefinedPdrError&) {
        out << "network_pdr undefined (no packets)\n";
    }
    out << fmt::format("report {}\ntimestamps {}\n", o.report, o.timestamps);
    return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
    std::int64_t total = 8835;
    double period = 600.0;
    std::optional<double> t7;
    std::optional<double> t8;
    bool t8_double = false;
    std::size_t payload = kReferencePayload;
    std::int64_t step = 100;
    std::vector<std::string> points;
    std::vector<std::string> reports;
    std::string out_path;
};

void add_analyze(CLI::App& app, AnalyzeOptions& o)
{
    app.add_option("--total", o.total, "Real-system device count")->check(CLI::PositiveNumber);
    app.add_option("--period", o.period, "Transmit period (s)");
    app.add_option("--t7", o.t7, "SF7 airtime (s); default from --payload");
    auto* t8 = app.add_option("--t8", o.t8, "SF8 airtime (s); default: SF8/SF7 airtime ratio of --payload");
    app.add_flag("--t8-double", o.t8_double, "Use exactly twice the SF7 airtime for SF8")->excludes(t8);
    app.add_option("--payload", o.payload, "Reference payload for airtime-derived defaults (bytes)");
    app.add_option("--step", o.step, "Sweep step in devices")->check(CLI::PositiveNumber);
    app.add_option("--point", o.points, "Experiment point n_moved:report_file (repeatable)");
    app.add_option("--report", o.reports, "Print the PDR summary of a report file (repeatable)");
    app.add_option("--out", o.out_path, "Write curve data here instead of standard output");
}

int run_analyze(const AnalyzeOptions& o, std::ostream& out)
{
    const double toa7 = airtime::time_on_air(airtime::RadioConfig::lora(7), o.payload);
    const double toa8 = airtime::time_on_air(airtime::RadioConfig::lora(8), o.payload);
    const double t7 = o.t7.value_or(toa7);
    const double t8 = o.t8 ? *o.t8 : (o.t8_double ? 2.0 * t7 : t7 * toa8 / toa7);

    std::ostringstream data;
    data << fmt::format("# total {} period {} t7 {:.6f} t8 {:.6f}\n", o.total, o.period, t7, t8);
    data << "# n_moved lower upper\n";
    const auto curve = analysis::bounds_curve(o.total, o.period, t7, t8, o.step);
    for (const auto& p : curve.points) {
        data << fmt::format("{} {:.6f} {:.6f}\n", p.n_moved, p.lower, p.upper);
    }
    const auto& best = curve.points[curve.argmax_lower()];
    data << fmt::format("# best_lower n_moved {} lower {:.6f}\n", best.n_moved, best.lower);

    if (!o.points.empty()) {
        data << "# n_moved lower upper empirical\n";
    }
    for (const auto& spec : o.points) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos) {
            throw ConfigError(fmt::format("--point '{}' is not n_moved:report_file", spec));
        }
        const auto moved = std::stoll(spec.substr(0, colon));
        if (moved < 0 || moved > o.total) {
            throw ConfigError(fmt::format("--point n_moved {} outside 0..{}", moved, o.total));
        }
        const auto report = controller::read_report(spec.substr(colon + 1));
        const auto summary = analysis::pdr_aggregate(std::span<const controller::ReportRow>(report.rows));
        const auto bounds = analysis::network_bounds({o.total - moved, moved, o.period, t7, t8});
        data << fmt::format("{} {:.6f} {:.6f} {:.6f}\n", moved, bounds.lower, bounds.upper, summary.network_pdr);
    }

    for (const auto& path : o.reports) {
        const auto report = controller::read_report(path);
        const auto summary = analysis::pdr_aggregate(std::span<const controller::ReportRow>(report.rows));
        data << fmt::format("# report {} network_pdr {:.6f} per_device_mean {:.6f} delivered {} sent {}\n", path,
                            summary.network_pdr, summary.per_device_mean, summary.delivered, summary.sent);
    }

    if (o.out_path.empty()) {
        out << data.str();
    } else {
        with_output_file(o.out_path, [&](std::ostream& f) { f << data.str(); });
        out << fmt::format("wrote {}\n", o.out_path);
    }
    return 0;
}

}  // namespace

std::string simulated_eui(std::size_t index)
{
    return fmt::format("70B3D57ED0{:06X}", index);
}

void request_stop()
{
    g_stop = true;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"LoRaWAN delivery-ratio scaling toolkit", "lorapdr"};
    app.set_config("--config", "", "key = value configuration file; flags win on conflict");
    app.require_subcommand(1);

    AirtimeOptions airtime_options;
    ScaleOptions scale_options;
    SimulateOptions simulate_options;
    ServeOptions serve_options;
    ExperimentOptions experiment_options;
    AnalyzeOptions analyze_options;

    auto* airtime_cmd = app.add_subcommand("airtime", "LoRa time-on-air for one packet");
    add_airtime(*airtime_cmd, airtime_options);
    auto* scale_cmd = app.add_subcommand("scale", "Experiment size carrying the load of a real deployment");
    add_scale(*scale_cmd, scale_options);
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate periodic uplinks with collisions");
    add_simulate(*simulate_cmd, simulate_options);
    auto* serve_cmd = app.add_subcommand("serve", "Run the mock network server");
    add_serve(*serve_cmd, serve_options);
    auto* experiment_cmd = app.add_subcommand("run-experiment", "Orchestrate one experiment");
    add_experiment(*experiment_cmd, experiment_options);
    auto* analyze_cmd = app.add_subcommand("analyze", "SF7/SF8 bound curves and experiment points");
    add_analyze(*analyze_cmd, analyze_options);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (airtime_cmd->parsed()) {
            return run_airtime(airtime_options, out);
        }
        if (scale_cmd->parsed()) {
            return run_scale(scale_options, out);
        }
        if (simulate_cmd->parsed()) {
            return run_simulate(simulate_options, out);
        }
        if (serve_cmd->parsed()) {
            return run_serve(serve_options, out, err);
        }
        if (experiment_cmd->parsed()) {
            return run_experiment_cmd(experiment_options, in, out);
        }
        if (analyze_cmd->parsed()) {
            return run_analyze(analyze_options, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace lorapdr::cli
