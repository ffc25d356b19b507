#pragma once

#include <string>
#include <vector>

#include <json.hpp>

// Report envelope shared by all CLI commands: the command echo, the
// parameters in effect (bench units — this object doubles as the config-file
// schema for exact replay), an SI mirror, results, warnings, tool version
// and an optional timestamp. Every numeric key carries its unit as a suffix.

namespace abforce::report {

struct ReportEnvelope {
  std::string command;
  nlohmann::ordered_json parameters =
      nlohmann::ordered_json::object();  // bench-unit echo == config schema
  nlohmann::ordered_json parameters_si =
      nlohmann::ordered_json::object();  // SI mirror
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
  std::string version;
  std::string timestamp;  // empty = suppressed

  nlohmann::ordered_json to_json() const;

  /// `#`-prefixed metadata block for CSV output: command, version,
  /// timestamp (when present), one line per parameter, one per warning.
  std::string csv_comment_block() const;
};

/// Current UTC time, e.g. "2026-08-17T12:34:56Z".
std::string iso8601_utc_now();

/// Full round-trip precision rendering (%.17g) for CSV payload cells.
std::string format_full(double v);

}  // namespace abforce::report
