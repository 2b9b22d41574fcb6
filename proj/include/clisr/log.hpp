#pragma once

#include <string_view>

namespace clisr {

// Debug logging is off by default; enable programmatically or by setting
// the CLISR_DEBUG environment variable to a non-empty value.
void set_debug_logging(bool enabled);
bool debug_logging_enabled();

// One line to stderr, prefixed "[clisr] ". No-op unless enabled.
void debug_log(std::string_view message);

}  // namespace clisr
