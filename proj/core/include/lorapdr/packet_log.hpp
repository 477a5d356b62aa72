#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lorapdr/packet.hpp"

namespace lorapdr::packet_log {

/// Packet log line: `ts<TAB>dev_eui<TAB>fcnt<TAB>sf`, ts with nine fractional
/// digits. Blank lines and `#` comments are ignored by the reader.
std::string format_line(const PacketRecord& record);

/// nullopt for anything that is not a well-formed record line.
std::optional<PacketRecord> parse_line(std::string_view line);

void write(std::ostream& out, std::span<const PacketRecord> records);

struct ReadResult {
    std::vector<PacketRecord> records;
    std::size_t malformed = 0;
    std::vector<std::size_t> malformed_lines;  ///< 1-based
};

ReadResult read(std::istream& in);

/// Throws IoError when the file cannot be opened.
ReadResult read_file(const std::string& path);
void write_file(const std::string& path, std::span<const PacketRecord> records);

}  // namespace lorapdr::packet_log
