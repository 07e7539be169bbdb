#include "pprwatch/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace pprwatch {

namespace {
std::atomic<bool> g_quiet{false};
std::mutex g_mutex;
}  // namespace

void log_warning(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << message << '\n';
}

void log_info(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard lock(g_mutex);
  std::cerr << message << '\n';
}

void set_log_quiet(bool quiet) { g_quiet = quiet; }
bool log_quiet() { return g_quiet; }

}  // namespace pprwatch
