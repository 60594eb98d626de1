#include "fsilab/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsilab/config.hpp"
#include "fsilab/errors.hpp"

namespace fsilab {

namespace {

enum class KeyType { Double, Int, Bool, Str };

struct KeyInfo {
  const char* key;
  KeyType type;
  const char* base_default;
};

// Universal flat schema; presets override a subset. Keys not used by a
// scenario kind are carried along untouched so configs stay diffable.
const std::vector<KeyInfo>& schema() {
  static const std::vector<KeyInfo> keys = {
      {"scenario", KeyType::Str, "thick-beam"},
      {"time.dt", KeyType::Double, "0.02"},
      {"time.t_end", KeyType::Double, "10"},
      {"coupling.gamma_n1", KeyType::Double, "100"},
      {"coupling.gamma_n2", KeyType::Double, "-1"},
      {"coupling.beta", KeyType::Double, "0.1"},
      {"coupling.k_max", KeyType::Int, "2"},
      {"coupling.treatment", KeyType::Str, "explicit"},
      {"coupling.early_exit_tol", KeyType::Double, "0"},
      {"solid.youngs_modulus", KeyType::Double, "200"},
      {"solid.poisson_ratio", KeyType::Double, "0.3"},
      {"solid.density", KeyType::Double, "1"},
      {"solid.nx", KeyType::Int, "10"},
      {"solid.ny", KeyType::Int, "30"},
      {"solid.width", KeyType::Double, "0.0853"},
      {"solid.height", KeyType::Double, "0.3"},
      {"solid.origin_x", KeyType::Double, "0.95735"},
      {"solid.origin_y", KeyType::Double, "0"},
      {"fluid.kind", KeyType::Str, "navier-stokes"},
      {"fluid.density", KeyType::Double, "1"},
      {"fluid.viscosity", KeyType::Double, "0.01"},
      {"fluid.grid_nx", KeyType::Int, "96"},
      {"fluid.grid_ny", KeyType::Int, "32"},
      {"fluid.channel_length", KeyType::Double, "2"},
      {"fluid.channel_height", KeyType::Double, "0.6"},
      {"fluid.inlet_scale", KeyType::Double, "3.3333333333333335"},
      {"fluid.inlet_height", KeyType::Double, "0.6"},
      {"fluid.inlet_pulsatile", KeyType::Bool, "false"},
      {"fluid.inlet_bias", KeyType::Double, "1.1"},
      {"fluid.inlet_period", KeyType::Double, "1"},
      {"fluid.top_bc", KeyType::Str, "wall"},
      {"fluid.picard_tol", KeyType::Double, "1e-06"},
      {"fluid.picard_max", KeyType::Int, "15"},
      {"surrogate.mass_ratio", KeyType::Double, "1"},
      {"surrogate.added_damping", KeyType::Double, "0"},
      {"surrogate.forcing", KeyType::Str, "constant"},
      {"surrogate.forcing_amplitude", KeyType::Double, "1"},
      {"surrogate.forcing_period", KeyType::Double, "1"},
      {"surrogate.forcing_dir", KeyType::Str, "x"},
      {"sdof.mass", KeyType::Double, "1"},
      {"sdof.damping", KeyType::Double, "2.5"},
      {"sdof.stiffness", KeyType::Double, "10"},
      {"sdof.force", KeyType::Double, "1.282"},
      {"output.snapshot_every", KeyType::Int, "0"},
      {"run.blowup_factor", KeyType::Double, "1000"},
  };
  return keys;
}

const KeyInfo* find_key(const std::string& key) {
  for (const auto& info : schema())
    if (key == info.key) return &info;
  return nullptr;
}

void check_enum(const std::string& key, const std::string& value,
                std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string opts;
  for (const char* a : allowed) opts += std::string(opts.empty() ? "" : ", ") + a;
  throw ConfigError("config key '" + key + "': '" + value + "' not one of {" + opts + "}");
}

void validate_value(const std::string& key, const std::string& value) {
  const KeyInfo* info = find_key(key);
  if (!info) {
    std::vector<std::string> known;
    for (const auto& k : schema()) known.push_back(k.key);
    throw ConfigError("unknown config key '" + key + "' (nearest valid key: '" +
                      nearest_key(key, known) + "')");
  }
  switch (info->type) {
    case KeyType::Double:
      parse_double_value(key, value);
      break;
    case KeyType::Int:
      parse_int_value(key, value);
      break;
    case KeyType::Bool:
      parse_bool_value(key, value);
      break;
    case KeyType::Str:
      break;
  }
  if (key == "scenario")
    check_enum(key, value, {"sdof", "thick-beam", "thin-valve", "surrogate-probe"});
  else if (key == "coupling.treatment")
    check_enum(key, value, {"explicit", "implicit"});
  else if (key == "fluid.kind")
    check_enum(key, value, {"navier-stokes", "surrogate"});
  else if (key == "fluid.top_bc")
    check_enum(key, value, {"wall", "slip"});
  else if (key == "surrogate.forcing")
    check_enum(key, value, {"none", "constant", "sine"});
  else if (key == "surrogate.forcing_dir")
    check_enum(key, value, {"x", "y"});
}

std::map<std::string, std::string> base_defaults() {
  std::map<std::string, std::string> values;
  for (const auto& info : schema()) values[info.key] = info.base_default;
  return values;
}

const std::map<std::string, std::map<std::string, std::string>>& preset_deltas() {
  static const std::map<std::string, std::map<std::string, std::string>> presets = {
      {"sdof",
       {{"scenario", "sdof"},
        {"time.dt", "0.02"},
        {"time.t_end", "20"},
        {"coupling.gamma_n1", "0"},
        {"coupling.k_max", "1"}}},
      {"thick-beam", {{"scenario", "thick-beam"}}},
      {"thin-valve",
       {{"scenario", "thin-valve"},
        {"time.dt", "0.005"},
        {"time.t_end", "3"},
        {"coupling.beta", "0.02"},
        {"solid.youngs_modulus", "500000"},
        {"solid.poisson_ratio", "0.4"},
        {"solid.nx", "4"},
        {"solid.ny", "100"},
        {"solid.width", "0.0212"},
        {"solid.height", "0.7"},
        {"solid.origin_x", "1.9894"},
        {"solid.origin_y", "0"},
        {"fluid.viscosity", "0.1"},
        {"fluid.grid_nx", "128"},
        {"fluid.grid_ny", "16"},
        {"fluid.channel_length", "8"},
        {"fluid.channel_height", "0.805"},
        {"fluid.inlet_scale", "5"},
        {"fluid.inlet_height", "1.61"},
        {"fluid.inlet_pulsatile", "true"},
        {"fluid.top_bc", "slip"}}},
      {"surrogate-probe",
       {{"scenario", "surrogate-probe"},
        {"fluid.kind", "surrogate"},
        {"solid.nx", "2"},
        {"solid.ny", "8"},
        {"solid.width", "0.1"},
        {"solid.height", "0.5"},
        {"solid.origin_x", "0"},
        {"solid.origin_y", "0"}}},
  };
  return presets;
}

}  // namespace

const std::string& ScenarioSpec::str(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("scenario: missing key '" + key + "'");
  return it->second;
}

double ScenarioSpec::number(const std::string& key) const {
  return parse_double_value(key, str(key));
}

int ScenarioSpec::integer(const std::string& key) const { return parse_int_value(key, str(key)); }

bool ScenarioSpec::boolean(const std::string& key) const { return parse_bool_value(key, str(key)); }

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, delta] : preset_deltas()) names.push_back(name);
  return names;
}

ScenarioSpec preset_scenario(const std::string& name) {
  const auto it = preset_deltas().find(name);
  if (it == preset_deltas().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known presets: " + known + ")");
  }
  ScenarioSpec spec;
  spec.values = base_defaults();
  for (const auto& [k, v] : it->second) spec.values[k] = v;
  return spec;
}

ScenarioSpec load_scenario(const std::string& preset_or_path,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  ScenarioSpec spec;
  if (preset_deltas().count(preset_or_path)) {
    spec = preset_scenario(preset_or_path);
  } else if (std::filesystem::exists(preset_or_path)) {
    std::ifstream in(preset_or_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto file_values = parse_flat_config(ss.str());
    const auto scenario_it = file_values.find("scenario");
    if (scenario_it == file_values.end())
      throw ConfigError("config file '" + preset_or_path + "': missing 'scenario' key");
    spec = preset_scenario(scenario_it->second);
    for (const auto& [k, v] : file_values) {
      validate_value(k, v);
      spec.values[k] = v;
    }
  } else {
    throw ConfigError("'" + preset_or_path + "' is neither a preset name nor a config file");
  }
  for (const auto& [k, v] : overrides) {
    validate_value(k, v);
    spec.values[k] = v;
  }
  return spec;
}

std::string serialize_scenario(const ScenarioSpec& spec) { return write_flat_config(spec.values); }

}  // namespace fsilab
