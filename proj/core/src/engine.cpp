#include "varjet/engine.hpp"

namespace varjet::engine {

namespace {
const std::atomic<bool>* g_cancel_flag = nullptr;
std::optional<std::chrono::steady_clock::time_point> g_deadline;
} // namespace

void set_cancel_flag(const std::atomic<bool>* flag) { g_cancel_flag = flag; }

void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
    g_deadline = deadline;
}

void checkpoint() {
    if (g_cancel_flag && g_cancel_flag->load(std::memory_order_relaxed))
        throw CancelledError("computation interrupted");
    if (g_deadline && std::chrono::steady_clock::now() > *g_deadline)
        throw CancelledError("computation timed out");
}

} // namespace varjet::engine
