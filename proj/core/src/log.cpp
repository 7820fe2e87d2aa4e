#include "nre/log.hpp"

#include <mutex>

namespace nre {

namespace {
std::mutex sink_mutex;
LogSink& sink() {
    static LogSink s;
    return s;
}
}  // namespace

void set_log_sink(LogSink s) {
    std::lock_guard lock(sink_mutex);
    sink() = std::move(s);
}

void log_warning(const std::string& message) {
    std::lock_guard lock(sink_mutex);
    if (sink()) sink()("warning: " + message);
}

}  // namespace nre
