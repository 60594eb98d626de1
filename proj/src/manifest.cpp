#include "fsilab/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsilab/errors.hpp"

namespace fsilab {

std::string fnv1a_digest(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_digest: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_digest(ss.str());
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["version"] = m.version;
  j["status"] = m.status;
  if (!m.error_message.empty()) j["error"] = m.error_message;
  j["wall_time_s"] = m.wall_time_s;
  j["seedless_asserted"] = m.seedless_asserted;
  j["config"] = m.config;
  j["derived"] = m.derived;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : m.outputs) outs.push_back({{"path", o.path}, {"digest", o.digest}});
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.status = j.at("status").get<std::string>();
  if (j.contains("error")) m.error_message = j["error"].get<std::string>();
  m.wall_time_s = j.at("wall_time_s").get<double>();
  m.seedless_asserted = j.value("seedless_asserted", false);
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  if (j.contains("derived"))
    m.derived = j["derived"].get<std::map<std::string, std::string>>();
  for (const auto& o : j.at("outputs"))
    m.outputs.push_back({o.at("path").get<std::string>(), o.at("digest").get<std::string>()});
  return m;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_manifest: cannot open '" + path + "'");
  out << manifest_to_json(manifest);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_manifest: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

}  // namespace fsilab
