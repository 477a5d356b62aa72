#include "lorapdr/report.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr::controller {

void write_report(std::ostream& out, const ExperimentMeta& meta, const std::vector<DeviceReport>& reports,
                  const std::vector<std::string>& turn_on_failed, const std::vector<LateResponder>& late)
{
    out << fmt::format("# experiment {} start {:.6f} end {:.6f} duration {}\n", meta.name, meta.start, meta.end,
                       meta.duration);
    for (const auto& id : turn_on_failed) {
        out << "# turn-on-failed " << id << '\n';
    }
    for (const auto& report : reports) {
        if (report.flags.query_error) {
            out << "# query-failed " << report.device_id << '\n';
        }
    }
    for (const auto& report : reports) {
        out << report.device_id << ' ' << report.delivered << ' ' << report.sent << '\n';
    }
    for (const auto& l : late) {
        out << "# late-responder " << l.device_id << " after " << l.after << '\n';
    }
}

void write_timestamps(std::ostream& out, const std::vector<DeviceCollection>& collected)
{
    std::vector<const PacketRecord*> packets;
    for (const auto& c : collected) {
        for (const auto& p : c.packets) {
            packets.push_back(&p);
        }
    }
    std::sort(packets.begin(), packets.end(), [](const auto* a, const auto* b) {
        return std::tie(a->received_ts, a->dev_eui, a->fcnt) < std::tie(b->received_ts, b->dev_eui, b->fcnt);
    });
    for (const auto* p : packets) {
        out << fmt::format("{} {} {:.9f}\n", p->dev_eui, p->fcnt, p->received_ts);
    }
}

void write_output(const ExperimentOutcome& outcome, const std::string& report_path,
                  const std::string& timestamps_path)
{
    std::ofstream report(report_path, std::ios::trunc);
    if (!report) {
        throw IoError(fmt::format("cannot write report {}", report_path));
    }
    write_report(report, outcome.meta, outcome.reports, outcome.turn_on.failed, outcome.turn_off.late);

    std::ofstream timestamps(timestamps_path, std::ios::trunc);
    if (!timestamps) {
        throw IoError(fmt::format("cannot write timestamp file {}", timestamps_path));
    }
    write_timestamps(timestamps, outcome.collected);
    if (!report || !timestamps) {
        throw IoError("writing experiment output failed");
    }
}

ParsedReport parse_report(std::istream& in)
{
    ParsedReport parsed;
    std::string line;
    std::size_t line_no = 0;
    const auto fail = [&](std::string_view why) {
        throw IoError(fmt::format("report line {}: {} ('{}')", line_no, why, line));
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string token; words >> token;) {
            w.push_back(token);
        }
        if (w.empty()) {
            continue;
        }
        try {
            if (w[0] == "#") {
                if (w.size() == 9 && w[1] == "experiment" && w[3] == "start" && w[5] == "end" && w[7] == "duration") {
                    parsed.meta = ExperimentMeta{w[2], std::stod(w[4]), std::stod(w[6]), std::stod(w[8])};
                } else if (w.size() == 3 && w[1] == "turn-on-failed") {
                    parsed.turn_on_failed.push_back(w[2]);
                } else if (w.size() == 3 && w[1] == "query-failed") {
                    parsed.query_failed.push_back(w[2]);
                } else if (w.size() == 5 && w[1] == "late-responder" && w[3] == "after") {
                    parsed.late.push_back(LateResponder{w[2], w[4]});
                }
                // other comment lines are ignored
                continue;
            }
            if (w.size() != 3) {
                fail("expected '<id> <delivered> <sent>'");
            }
            const auto delivered = std::stoull(w[1]);
            const auto sent = std::stoull(w[2]);
            if (delivered > sent) {
                fail("delivered exceeds sent");
            }
            parsed.rows.push_back(ReportRow{w[0], delivered, sent});
        } catch (const std::logic_error&) {
            fail("unparseable number");
        }
    }
    return parsed;
}

ParsedReport read_report(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open report {}", path));
    }
    return parse_report(in);
}

}  // namespace lorapdr::controller
