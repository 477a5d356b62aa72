#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include "lorapdr_cli/cli.hpp"

namespace {

extern "C" void on_signal(int)
{
    lorapdr::cli::request_stop();
}

}  // namespace

int main(int argc, char** argv)
{
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::vector<std::string> args(argv + 1, argv + argc);
    return lorapdr::cli::run(args, std::cin, std::cout, std::cerr);
}
