#pragma once

#include <functional>
#include <string>

namespace nre {

/// Diagnostics sink for non-fatal conditions. Silent until a sink is set.
using LogSink = std::function<void(const std::string&)>;

void set_log_sink(LogSink sink);
void log_warning(const std::string& message);

}  // namespace nre
