#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fsilab/coupling.hpp"
#include "fsilab/fluid_ns.hpp"
#include "fsilab/manifest.hpp"
#include "fsilab/sdof.hpp"

namespace fsilab {

// Fully resolved flat configuration for one run. Presets fill every key;
// file values and CLI overrides replace individual entries.
struct ScenarioSpec {
  std::map<std::string, std::string> values;

  const std::string& str(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string name() const { return str("scenario"); }

  bool operator==(const ScenarioSpec& other) const { return values == other.values; }
};

std::vector<std::string> preset_names();
ScenarioSpec preset_scenario(const std::string& name);

// Resolves a preset name or a flat-config file path plus overrides into a
// validated spec. Unknown keys are rejected naming the nearest valid key.
ScenarioSpec load_scenario(const std::string& preset_or_path,
                           const std::vector<std::pair<std::string, std::string>>& overrides = {});
std::string serialize_scenario(const ScenarioSpec& spec);

// ---- builders -----------------------------------------------------------

struct SdofSetup {
  SdofParams params;
  double dt = 0.0;
  double t_end = 0.0;
};

bool is_sdof_scenario(const ScenarioSpec& spec);
SdofSetup build_sdof_setup(const ScenarioSpec& spec);
// Time histories of displacement/velocity/acceleration ("d", "v", "a").
std::map<std::string, TimeSeries> run_sdof(const SdofSetup& setup);

// Owning bundle for a coupled FEM scenario; systems() exposes the views the
// coupling driver needs.
struct FemSetup {
  SolidSystem solid;
  std::unique_ptr<FluidSubproblem> fluid;
  InterfaceMesh interface;
  CouplingConfig coupling;
  double t_end = 0.0;
  int tip_node = -1;
  double blowup_limit = 0.0;
  const NavierStokesFluid* ns = nullptr;  // non-null for Navier-Stokes scenarios

  CoupledSystems systems() const;
};

FemSetup build_fem_setup(const ScenarioSpec& spec, AssemblyMode mode = AssemblyMode::Parallel);

// Mean-inlet-velocity Reynolds number of a channel scenario based on the
// solid length.
double scenario_reynolds_number(const ScenarioSpec& spec);

// ---- running ------------------------------------------------------------

struct RunOutputs {
  RunManifest manifest;
  std::map<std::string, TimeSeries> series;
};

// Runs the scenario, writes series.csv / iterations.csv / manifest.json
// (and optional field snapshots) under out_dir. Failures are recorded in
// the manifest status instead of propagating.
RunOutputs run_scenario(const ScenarioSpec& spec, const std::string& out_dir,
                        bool seedless = false);

struct SweepCell {
  int index = 0;
  ScenarioSpec spec;
  std::string directory;
  std::string status;
  double settling_time = 0.0;
  bool settled = false;
  double phase_lag = 0.0;
  bool lag_defined = false;
  double max_displacement = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::string summary_path;
};

// Cartesian sweep over value lists; one run directory per cell plus a
// summary CSV ordered by grid index. Cells run concurrently up to
// `workers`; failures are recorded and the sweep continues. Phase lag is
// reported against the first cell's primary channel when both series are
// periodic over `phase_period` (0 disables).
SweepResult sweep_scenario(const ScenarioSpec& base,
                           const std::vector<std::pair<std::string, std::vector<std::string>>>& grid,
                           const std::string& out_dir, int workers = 1,
                           double phase_period = 0.0, bool seedless = false);

}  // namespace fsilab
