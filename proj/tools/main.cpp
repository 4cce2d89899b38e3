#include <atomic>
#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include "varjet/cli.hpp"
#include "varjet/engine.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void handle_signal(int) { g_interrupted.store(true); }

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    varjet::engine::set_cancel_flag(&g_interrupted);

    std::vector<std::string> args(argv + 1, argv + argc);
    return varjet::run_command(args, std::cout, std::cerr);
}
