#include "lorapdr/roster.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "lorapdr/errors.hpp"
#include "lorapdr/packet.hpp"

namespace lorapdr::controller {

namespace {

std::string trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::vector<std::string>> read_rows(std::istream& in)
{
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto content = trim(line);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto comma = content.find(',', pos);
            fields.push_back(trim(std::string_view(content).substr(pos, comma - pos)));
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

DeviceMatrix::DeviceMatrix(std::vector<RosterEntry> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) {
        throw RosterError("experiment roster is empty");
    }
    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> euis;
    for (auto& entry : entries_) {
        if (entry.device_id.empty()) {
            throw RosterError("empty device id in roster");
        }
        if (!is_valid_eui(entry.dev_eui)) {
            throw RosterError(fmt::format("device {} has invalid EUI '{}'", entry.device_id, entry.dev_eui));
        }
        entry.dev_eui = normalize_eui(entry.dev_eui);
        if (!ids.insert(entry.device_id).second) {
            throw RosterError(fmt::format("duplicate device id {}", entry.device_id));
        }
        if (!euis.insert(entry.dev_eui).second) {
            throw RosterError(fmt::format("duplicate EUI {}", entry.dev_eui));
        }
    }
}

std::optional<std::size_t> DeviceMatrix::index_of(const std::string& device_id) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].device_id == device_id) {
            return i;
        }
    }
    return std::nullopt;
}

const std::string& DeviceMatrix::eui_of(const std::string& device_id) const
{
    const auto index = index_of(device_id);
    if (!index) {
        throw RosterError(fmt::format("device {} is not in the roster", device_id));
    }
    return entries_[*index].dev_eui;
}

DeviceMatrix load_roster(std::istream& experiment_table, std::istream& mapping_table)
{
    std::unordered_map<std::string, std::string> mapping;
    std::unordered_set<std::string> mapped_euis;
    for (const auto& row : read_rows(mapping_table)) {
        if (row.size() < 2 || row[0].empty()) {
            throw RosterError(fmt::format("mapping line '{}' is not id,eui", fmt::join(row, ",")));
        }
        if (!is_valid_eui(row[1])) {
            throw RosterError(fmt::format("mapping for {} has invalid EUI '{}'", row[0], row[1]));
        }
        const auto eui = normalize_eui(row[1]);
        if (!mapping.emplace(row[0], eui).second) {
            throw RosterError(fmt::format("duplicate id {} in mapping", row[0]));
        }
        if (!mapped_euis.insert(eui).second) {
            throw RosterError(fmt::format("duplicate EUI {} in mapping", eui));
        }
    }

    std::vector<RosterEntry> entries;
    for (const auto& row : read_rows(experiment_table)) {
        const auto& id = row.front();
        if (id.empty()) {
            continue;
        }
        const auto it = mapping.find(id);
        if (it == mapping.end()) {
            throw RosterError(fmt::format("unmapped id {}", id));
        }
        entries.push_back(RosterEntry{id, it->second});
    }
    return DeviceMatrix(std::move(entries));
}

DeviceMatrix load_roster(const std::string& experiment_path, const std::string& mapping_path)
{
    std::ifstream experiment(experiment_path);
    if (!experiment) {
        throw IoError(fmt::format("cannot open experiment table {}", experiment_path));
    }
    std::ifstream mapping(mapping_path);
    if (!mapping) {
        throw IoError(fmt::format("cannot open mapping table {}", mapping_path));
    }
    return load_roster(experiment, mapping);
}

void write_mapping(std::ostream& out, const std::vector<RosterEntry>& entries)
{
    for (const auto& entry : entries) {
        out << entry.device_id << ',' << entry.dev_eui << '\n';
    }
}

}  // namespace lorapdr::controller
