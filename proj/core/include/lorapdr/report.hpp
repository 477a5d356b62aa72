#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lorapdr/controller.hpp"

namespace lorapdr::controller {

// Main report layout:
//   # experiment <name> start <ts> end <ts> duration <s>
//   # turn-on-failed <id>            (one per failure)
//   # query-failed <id>              (one per device whose query errored)
//   <id> <delivered> <sent>          (one per roster device, matrix order)
//   # late-responder <id> after <id> (trailer)
//
// Timestamp file: `<dev_eui> <fcnt> <ts>` per delivered packet, ascending ts.

void write_report(std::ostream& out, const ExperimentMeta& meta, const std::vector<DeviceReport>& reports,
                  const std::vector<std::string>& turn_on_failed, const std::vector<LateResponder>& late);

void write_timestamps(std::ostream& out, const std::vector<DeviceCollection>& collected);

/// Writes both files. Throws IoError when either path is unwritable.
void write_output(const ExperimentOutcome& outcome, const std::string& report_path,
                  const std::string& timestamps_path);

struct ReportRow {
    std::string device_id;
    std::uint64_t delivered = 0;
    std::uint64_t sent = 0;
};

struct ParsedReport {
    ExperimentMeta meta;
    std::vector<std::string> turn_on_failed;
    std::vector<std::string> query_failed;
    std::vector<ReportRow> rows;
    std::vector<LateResponder> late;
};

/// Throws IoError on lines that fit none of the report forms.
ParsedReport parse_report(std::istream& in);
ParsedReport read_report(const std::string& path);

}  // namespace lorapdr::controller
