#include "fsilab/coupling.hpp"

#include <chrono>
#include <cmath>

#include "fsilab/errors.hpp"

namespace fsilab {

CoupledState make_initial_state(const CoupledSystems& systems) {
  CoupledState state;
  state.solid = SolidState::zero(systems.solid->num_dofs());
  state.fluid = systems.fluid->initial_state();
  state.f_s = Eigen::VectorXd::Zero(systems.solid->num_dofs());
  return state;
}

namespace {

std::vector<Vec2> interface_samples(const InterfaceGeometry& geom, const Eigen::VectorXd& field) {
  return sample_interface_field(geom, field);
}

std::pair<CoupledState, IterationTrace> step_partitioned(const CoupledState& state_n,
                                                         const CouplingConfig& config,
                                                         const CoupledSystems& systems,
                                                         bool implicit_velocity) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const SolidSystem& solid = *systems.solid;
  const double t_next = state_n.t + config.dt;

  // Force predictor: previous converged interface force.
  Eigen::VectorXd f_k = state_n.f_s;
  IterationTrace trace;

  SolidState solid_k = state_n.solid;
  FluidState fluid_k = state_n.fluid;
  InterfaceExchange exchange;
  // Interface configuration lags one iteration behind the solid solve.
  Eigen::VectorXd d_geometry = state_n.solid.d;
  bool have_fluid_hint = false;

  for (int k = 1; k <= config.k_max; ++k) {
    // Interface geometry and M_fs from the latest available displacement.
    InterfaceGeometry geom = interface_geometry(*systems.interface, solid.mesh, d_geometry);

    SpMat m_fs;
    const SpMat* m_fs_ptr = nullptr;
    if (implicit_velocity) {
      m_fs = assemble_interface_mass(geom, config.gamma_n1, solid.num_dofs());
      m_fs_ptr = &m_fs;
    }

    NewtonReport newton_report;
    solid_k = solve_solid_step(solid, state_n.solid, f_k, m_fs_ptr, config.dt, systems.newton,
                               &newton_report);
    trace.newton_iterations.push_back(newton_report.iterations);

    if (systems.blowup_limit > 0.0 &&
        solid_k.d.lpNorm<Eigen::Infinity>() > systems.blowup_limit)
      throw DivergenceError("partitioned step diverged: ||d||_inf exceeded blow-up limit",
                            state_n.step_index + 1, t_next);

    // Update the interface to the new solid configuration and re-sample.
    d_geometry = solid_k.d;
    geom = interface_geometry(*systems.interface, solid.mesh, d_geometry);
    const std::vector<Vec2> v_s = interface_samples(geom, solid_k.v);
    const std::vector<Vec2> a_s = interface_samples(geom, solid_k.a);

    auto [fluid_next, exch] = systems.fluid->advance(
        state_n.fluid, geom, v_s, a_s, t_next, config.dt, have_fluid_hint ? &fluid_k : nullptr);
    fluid_k = std::move(fluid_next);
    exchange = std::move(exch);
    have_fluid_hint = true;

    // Fluid force: explicit treatment keeps the full penalty mismatch,
    // implicit treatment keeps the fluid-velocity part only (the solid
    // velocity part moved into M_fs).
    Eigen::VectorXd f_star = -assemble_f_ext1(geom, exchange, solid.num_dofs());
    if (implicit_velocity) {
      const std::vector<Vec2> zero(v_s.size(), Vec2::Zero());
      f_star -= assemble_f_ext2(geom, zero, exchange.velocity, config.gamma_n1, solid.num_dofs());
    } else {
      f_star -= assemble_f_ext2(geom, v_s, exchange.velocity, config.gamma_n1, solid.num_dofs());
    }

    const Eigen::VectorXd f_next = -config.beta * f_star + (1.0 - config.beta) * f_k;
    const double increment = (f_next - f_k).norm();
    trace.force_increment_norms.push_back(increment);
    f_k = f_next;

    if (config.early_exit_tol > 0.0 && increment <= config.early_exit_tol) break;
  }

  CoupledState next;
  next.solid = std::move(solid_k);
  next.fluid = std::move(fluid_k);
  next.f_s = std::move(f_k);
  next.t = t_next;
  next.step_index = state_n.step_index + 1;
  trace.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(next), std::move(trace)};
}

}  // namespace

std::pair<CoupledState, IterationTrace> step_algorithm1(const CoupledState& state_n,
                                                        const CouplingConfig& config,
                                                        const CoupledSystems& systems) {
  if (config.treatment != VelocityTreatment::Explicit)
    throw std::invalid_argument("step_algorithm1: config.treatment must be Explicit");
  return step_partitioned(state_n, config, systems, false);
}

std::pair<CoupledState, IterationTrace> step_algorithm2(const CoupledState& state_n,
                                                        const CouplingConfig& config,
                                                        const CoupledSystems& systems) {
  if (config.treatment != VelocityTreatment::Implicit)
    throw std::invalid_argument("step_algorithm2: config.treatment must be Implicit");
  return step_partitioned(state_n, config, systems, true);
}

Recorder tip_displacement_recorder(const std::string& label, int node, int component) {
  return {label, [node, component](const CoupledState& s, const IterationTrace&) {
            return s.solid.d[2 * node + component];
          }};
}

Recorder interface_force_recorder(const std::string& label, int component) {
  return {label, [component](const CoupledState& s, const IterationTrace&) {
            double total = 0.0;
            for (int i = component; i < s.f_s.size(); i += 2) total += s.f_s[i];
            return total;
          }};
}

SimulationResult run_simulation(
    CoupledState initial, const CouplingConfig& config, const CoupledSystems& systems,
    double t_end, const std::vector<Recorder>& recorders,
    const std::function<void(const CoupledState&, const IterationTrace&)>& on_step) {
  config.validate();
  if (t_end < 0.0) throw std::invalid_argument("run_simulation: t_end must be >= 0");

  SimulationResult result;
  for (const auto& r : recorders) result.series[r.label].label = r.label;

  const int steps = static_cast<int>(std::floor(t_end / config.dt + 1e-9));
  CoupledState state = std::move(initial);
  for (int n = 0; n < steps; ++n) {
    std::pair<CoupledState, IterationTrace> out;
    try {
      out = config.treatment == VelocityTreatment::Explicit
                ? step_algorithm1(state, config, systems)
                : step_algorithm2(state, config, systems);
    } catch (const DivergenceError&) {
      throw;
    } catch (const NonConvergenceError& err) {
      throw NonConvergenceError("step " + std::to_string(n + 1) + " (t = " +
                                    std::to_string(state.t + config.dt) + "): " + err.what(),
                                err.residual_history);
    }
    state = std::move(out.first);
    for (const auto& r : recorders)
      result.series[r.label].push(state.t, r.sample(state, out.second));
    if (on_step) on_step(state, out.second);
    result.traces.push_back(std::move(out.second));
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace fsilab
