#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lorapdr::cli {

/// Runs one `lorapdr` invocation. `args` excludes the program name. Returns
/// the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Asks a running `serve` loop to shut down (used by signal handlers).
void request_stop();

/// EUI assigned to the i-th (1-based) simulated device.
std::string simulated_eui(std::size_t index);

}  // namespace lorapdr::cli
