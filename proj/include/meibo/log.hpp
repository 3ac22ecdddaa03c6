// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace meibo::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Current log level; initialized from the MEIBO_LOG environment variable
/// (error|warn|info|debug), defaults to warn.
Level level();

void set_level(Level lv);

void write(Level lv, const std::string& msg);

inline void error(const std::string& msg) { write(Level::Error, msg); }
inline void warn(const std::string& msg) { write(Level::Warn, msg); }
inline void info(const std::string& msg) { write(Level::Info, msg); }
inline void debug(const std::string& msg) { write(Level::Debug, msg); }

}  // namespace meibo::log
