#include "lorapdr/packet_log.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "lorapdr/errors.hpp"

namespace lorapdr {

bool is_valid_eui(std::string_view eui)
{
    return eui.size() == 16 &&
           std::all_of(eui.begin(), eui.end(), [](unsigned char c) { return std::isxdigit(c) != 0; });
}

std::string normalize_eui(std::string_view eui)
{
    if (!is_valid_eui(eui)) {
        throw ConfigError(fmt::format("invalid EUI '{}': expected 16 hex characters", eui));
    }
    std::string out(eui);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

}  // namespace lorapdr

namespace lorapdr::packet_log {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto tab = line.find('\t', pos);
        fields.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
        if (tab == std::string_view::npos) {
            break;
        }
        pos = tab + 1;
    }
    return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view text)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

std::string format_line(const PacketRecord& record)
{
    return fmt::format("{:.9f}\t{}\t{}\t{}", record.received_ts, record.dev_eui, record.fcnt, record.sf);
}

std::optional<PacketRecord> parse_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 4 || !is_valid_eui(fields[1])) {
        return std::nullopt;
    }
    const auto ts = parse_number<double>(fields[0]);
    const auto fcnt = parse_number<std::uint32_t>(fields[2]);
    const auto sf = parse_number<int>(fields[3]);
    if (!ts || !std::isfinite(*ts) || !fcnt || !sf || *sf < 7 || *sf > 12) {
        return std::nullopt;
    }
    return PacketRecord{normalize_eui(fields[1]), *fcnt, *ts, *sf};
}

void write(std::ostream& out, std::span<const PacketRecord> records)
{
    for (const auto& record : records) {
        out << format_line(record) << '\n';
    }
}

ReadResult read(std::istream& in)
{
    ReadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (view.empty() || view == "\r" || view.front() == '#') {
            continue;
        }
        if (auto record = parse_line(view)) {
            result.records.push_back(std::move(*record));
        } else {
            ++result.malformed;
            result.malformed_lines.push_back(line_no);
        }
    }
    return result;
}

ReadResult read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open packet log {}", path));
    }
    return read(in);
}

void write_file(const std::string& path, std::span<const PacketRecord> records)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot write packet log {}", path));
    }
    write(out, records);
    if (!out) {
        throw IoError(fmt::format("write to {} failed", path));
    }
}

}  // namespace lorapdr::packet_log
