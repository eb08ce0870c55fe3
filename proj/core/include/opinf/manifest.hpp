#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opinf {

// Provenance block attached to machine-readable command output.
struct RunManifest {
  std::string tool;            // binary name
  std::string version;         // library version
  std::string schema;          // output schema version
  std::string command;         // subcommand name
  std::vector<std::string> arguments;
  std::string started_utc;     // ISO-8601, second resolution
  double wall_time_s = 0;
  std::uint64_t input_hash = 0;  // FNV-1a of the semantic inputs, 0 if unused
};

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& arguments);

// Current UTC time formatted as 2026-01-02T15:04:05Z.
std::string utc_timestamp();

} // namespace opinf
