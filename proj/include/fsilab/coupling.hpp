#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fsilab/analysis.hpp"
#include "fsilab/fluid.hpp"
#include "fsilab/nitsche.hpp"
#include "fsilab/solid.hpp"

namespace fsilab {

struct CoupledState {
  SolidState solid;
  FluidState fluid;
  Eigen::VectorXd f_s;  // relaxed interface force applied to the solid
  double t = 0.0;
  int step_index = 0;
};

struct IterationTrace {
  std::vector<double> force_increment_norms;  // ||F^(k+1) - F^(k)|| per iteration
  std::vector<int> newton_iterations;
  double wall_time_s = 0.0;
};

struct CoupledSystems {
  const SolidSystem* solid = nullptr;
  const FluidSubproblem* fluid = nullptr;
  const InterfaceMesh* interface = nullptr;
  double blowup_limit = 0.0;  // divergence detector on ||d||_inf; <= 0 disables
  NewtonOptions newton;
};

CoupledState make_initial_state(const CoupledSystems& systems);

// Algorithm with explicit treatment of the solid velocity: the solid keeps
// its unmodified mass/stiffness and the penalty mismatch enters the fluid
// force only.
std::pair<CoupledState, IterationTrace> step_algorithm1(const CoupledState& state_n,
                                                        const CouplingConfig& config,
                                                        const CoupledSystems& systems);

// Algorithm with implicit treatment of the solid velocity: the interface
// mass matrix M_fs acts as damping on the solid and the fluid force carries
// the fluid-velocity term alone.
std::pair<CoupledState, IterationTrace> step_algorithm2(const CoupledState& state_n,
                                                        const CouplingConfig& config,
                                                        const CoupledSystems& systems);

struct Recorder {
  std::string label;
  std::function<double(const CoupledState&, const IterationTrace&)> sample;
};

Recorder tip_displacement_recorder(const std::string& label, int node, int component);
Recorder interface_force_recorder(const std::string& label, int component);

struct SimulationResult {
  std::map<std::string, TimeSeries> series;
  CoupledState final_state;
  std::vector<IterationTrace> traces;
};

// Fixed-dt outer loop dispatching on config.treatment; recorders sample
// after each completed step. on_step, when set, observes completed steps
// (used for field snapshots).
SimulationResult run_simulation(
    CoupledState initial, const CouplingConfig& config, const CoupledSystems& systems,
    double t_end, const std::vector<Recorder>& recorders,
    const std::function<void(const CoupledState&, const IterationTrace&)>& on_step = {});

}  // namespace fsilab
