// SPDX-License-Identifier: Apache-2.0

#include "meibo/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace meibo::log {

namespace {

Level g_level = [] {
  const char* env = std::getenv("MEIBO_LOG");
  if (env == nullptr) return Level::Warn;
  if (std::strcmp(env, "error") == 0) return Level::Error;
  if (std::strcmp(env, "warn") == 0) return Level::Warn;
  if (std::strcmp(env, "info") == 0) return Level::Info;
  if (std::strcmp(env, "debug") == 0) return Level::Debug;
  return Level::Warn;
}();

std::mutex g_mutex;

const char* tag(Level lv) {
  switch (lv) {
    case Level::Error: return "error";
    case Level::Warn: return "warn";
    case Level::Info: return "info";
    case Level::Debug: return "debug";
  }
  return "?";
}

}  // namespace

Level level() { return g_level; }

void set_level(Level lv) { g_level = lv; }

void write(Level lv, const std::string& msg) {
  if (static_cast<int>(lv) > static_cast<int>(g_level)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[meibo %s] %s\n", tag(lv), msg.c_str());
}

}  // namespace meibo::log
