#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fsilab {

inline constexpr const char* kVersionString = "fsilab 0.1.0";

// FNV-1a 64-bit content digest, hex encoded.
std::string fnv1a_digest(const std::string& data);
std::string file_digest(const std::string& path);

struct OutputFile {
  std::string path;  // relative to the run directory
  std::string digest;
};

// Everything needed to reproduce a run: the fully resolved flat config plus
// bookkeeping. The embedded config parses back through load_scenario.
struct RunManifest {
  std::map<std::string, std::string> config;
  std::string version = kVersionString;
  std::string status = "ok";
  std::string error_message;
  double wall_time_s = 0.0;
  bool seedless_asserted = false;
  std::map<std::string, std::string> derived;  // e.g. dof counts, Reynolds number
  std::vector<OutputFile> outputs;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& json_text);
void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

}  // namespace fsilab
