#include "clisr/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>

namespace clisr {

namespace {

std::atomic<bool> g_debug{[] {
  const char* env = std::getenv("CLISR_DEBUG");
  return env != nullptr && env[0] != '\0';
}()};

}  // namespace

void set_debug_logging(bool enabled) { g_debug.store(enabled); }

bool debug_logging_enabled() { return g_debug.load(); }

void debug_log(std::string_view message) {
  if (!g_debug.load()) return;
  std::cerr << "[clisr] " << message << '\n';
}

}  // namespace clisr
