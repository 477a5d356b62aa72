#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lorapdr::controller {

struct RosterEntry {
    std::string device_id;
    std::string dev_eui;

    friend bool operator==(const RosterEntry&, const RosterEntry&) = default;
};

/// Ordered id <-> EUI mapping of the devices taking part in one experiment.
/// Construction enforces a non-empty, bijective mapping.
class DeviceMatrix {
public:
    /// Throws RosterError on an empty list, duplicate id or duplicate EUI.
    explicit DeviceMatrix(std::vector<RosterEntry> entries);

    std::size_t size() const { return entries_.size(); }
    const RosterEntry& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const std::vector<RosterEntry>& entries() const { return entries_; }

    std::optional<std::size_t> index_of(const std::string& device_id) const;
    const std::string& eui_of(const std::string& device_id) const;

private:
    std::vector<RosterEntry> entries_;
};

/// Experiment table: one device id per line (first comma-separated field).
/// Mapping table: `id,eui` per line. `#` lines and blank lines are ignored.
/// Throws RosterError naming the first id without a mapping.
DeviceMatrix load_roster(std::istream& experiment_table, std::istream& mapping_table);
DeviceMatrix load_roster(const std::string& experiment_path, const std::string& mapping_path);

/// Writes the `id,eui` format read by load_roster.
void write_mapping(std::ostream& out, const std::vector<RosterEntry>& entries);

}  // namespace lorapdr::controller
