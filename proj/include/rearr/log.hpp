#ifndef REARR_LOG_HPP
#define REARR_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace rearr {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// PEBBLE_LOG in {error, info, debug}; defaults to error.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("PEBBLE_LOG");
        if (env && std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        if (env && std::strcmp(env, "info") == 0) return LogLevel::Info;
        return LogLevel::Error;
    }();
    return level;
}

inline void log_at(LogLevel level, const std::string& msg) {
    if (level > log_level()) {
        return;
    }
    const char* tag = level == LogLevel::Error   ? "error"
                      : level == LogLevel::Info ? "info"
                                                : "debug";
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void log_error(const std::string& msg) { log_at(LogLevel::Error, msg); }
inline void log_info(const std::string& msg) { log_at(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_at(LogLevel::Debug, msg); }

}  // namespace rearr

#endif
