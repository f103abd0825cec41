#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

// Stderr logging gated by WEALTHSIM_LOG: quiet | warn | info (default) | debug.

namespace wealthsim::log {

enum class Level { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level threshold() {
    static const Level cached = [] {
        const char* env = std::getenv("WEALTHSIM_LOG");
        if (env == nullptr) return Level::Info;
        if (std::strcmp(env, "quiet") == 0) return Level::Quiet;
        if (std::strcmp(env, "warn") == 0) return Level::Warn;
        if (std::strcmp(env, "debug") == 0) return Level::Debug;
        return Level::Info;
    }();
    return cached;
}

template <typename... Args>
void emit(Level level, const char* fmt, Args... args) {
    if (level > threshold()) return;
    std::fprintf(stderr, fmt, args...);
    std::fputc('\n', stderr);
}

template <typename... Args>
void warn(const char* fmt, Args... args) {
    emit(Level::Warn, fmt, args...);
}

template <typename... Args>
void info(const char* fmt, Args... args) {
    emit(Level::Info, fmt, args...);
}

template <typename... Args>
void debug(const char* fmt, Args... args) {
    emit(Level::Debug, fmt, args...);
}

}  // namespace wealthsim::log
