#include "abforce/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace abforce::report {

nlohmann::ordered_json ReportEnvelope::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  j["parameters"] = parameters;
  j["parameters_si"] = parameters_si;
  j["results"] = results;
  j["warnings"] = warnings;
  return j;
}

std::string ReportEnvelope::csv_comment_block() const {
  std::string out;
  out += "# command: " + command + "\n";
  out += "# version: " + version + "\n";
  if (!timestamp.empty()) out += "# timestamp: " + timestamp + "\n";
  for (const auto& [key, value] : parameters.items()) {
    out += "# parameter " + key + " = " + value.dump() + "\n";
  }
  for (const auto& w : warnings) {
    out += "# warning: " + w + "\n";
  }
  return out;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace abforce::report
