#pragma once

#include <string_view>

namespace pprwatch {

// Warnings go to stderr unless silenced (tests silence them).
void log_warning(std::string_view message);
void log_info(std::string_view message);
void set_log_quiet(bool quiet);
bool log_quiet();

}  // namespace pprwatch
