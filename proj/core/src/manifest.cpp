#include "opinf/manifest.hpp"

#include "opinf/version.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace opinf {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
#if defined(_WIN32)
  gmtime_s(&tm, &t);
#else
  gmtime_r(&t, &tm);
#endif
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& arguments) {
  RunManifest m;
  m.tool = "opinf";
  m.version = kVersion;
  m.schema = kSchemaVersion;
  m.command = command;
  m.arguments = arguments;
  m.started_utc = utc_timestamp();
  return m;
}

} // namespace opinf
