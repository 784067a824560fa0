#pragma once

// Structured logging: JSON lines on stderr, data stays on stdout and in
// files. Verbosity comes from POSEFUSE_LOG (debug|info|warn|error).

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

#include <json.hpp>

namespace posefuse::logging {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("POSEFUSE_LOG");
    if (!env) return Level::info;
    const std::string_view v(env);
    if (v == "debug") return Level::debug;
    if (v == "warn") return Level::warn;
    if (v == "error") return Level::error;
    return Level::info;
  }();
  return level;
}

inline const char* level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
  }
  return "info";
}

inline void log(Level level, std::string_view msg, nlohmann::json fields = nlohmann::json::object()) {
  if (level < threshold()) return;
  fields["level"] = level_name(level);
  fields["msg"] = msg;
  fields["ts"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count();
  static std::mutex mutex;
  const std::lock_guard<std::mutex> guard(mutex);
  std::cerr << fields.dump() << '\n';
}

inline void debug(std::string_view msg, nlohmann::json fields = nlohmann::json::object()) {
  log(Level::debug, msg, std::move(fields));
}
inline void info(std::string_view msg, nlohmann::json fields = nlohmann::json::object()) {
  log(Level::info, msg, std::move(fields));
}
inline void warn(std::string_view msg, nlohmann::json fields = nlohmann::json::object()) {
  log(Level::warn, msg, std::move(fields));
}
inline void error(std::string_view msg, nlohmann::json fields = nlohmann::json::object()) {
  log(Level::error, msg, std::move(fields));
}

}  // namespace posefuse::logging
