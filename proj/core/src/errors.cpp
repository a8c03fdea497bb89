#include "mapoi/errors.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace mapoi {

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_log_mutex;
}  // namespace

void log_warning(const std::string& message) {
    if (!g_warnings.load(std::memory_order_relaxed)) return;
    std::lock_guard lock(g_log_mutex);
    std::clog << "mapoi: warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

}  // namespace mapoi
