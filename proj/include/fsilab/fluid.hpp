#pragma once

#include <Eigen/Dense>
#include <memory>
#include <utility>
#include <vector>

#include "fsilab/geometry.hpp"

namespace fsilab {

struct FluidProperties {
  double density = 1.0;
  double viscosity = 1.0;
  Vec2 body_force = Vec2::Zero();

  void validate() const;
};

struct FluidState {
  Eigen::VectorXd v;  // 2 dofs per node
  Eigen::VectorXd p;  // 1 dof per node
  double t = 0.0;
};

// Interface data exchanged per coupling iteration: the fluid traction
// sigma^f . n^f and the fluid velocity, both sampled at the interface
// quadrature points (n^f is the fluid-side outward normal, i.e. -n^s).
struct InterfaceExchange {
  std::vector<Vec2> traction;
  std::vector<Vec2> velocity;
};

// A fluid sub-problem advances one BDF1 step from state_n given the current
// interface geometry and the solid interface velocity samples. advance() is
// a pure function of its inputs so a coupling iteration can re-solve the
// same step repeatedly; `hint` optionally warms up the nonlinear iteration.
class FluidSubproblem {
 public:
  virtual ~FluidSubproblem() = default;

  virtual FluidState initial_state() const = 0;

  virtual std::pair<FluidState, InterfaceExchange> advance(
      const FluidState& state_n, const InterfaceGeometry& iface, const std::vector<Vec2>& v_s,
      const std::vector<Vec2>& a_s, double t_next, double dt,
      const FluidState* hint = nullptr) const = 0;
};

enum class SurrogateForcingKind { None, Constant, Sine };

struct SurrogateForcing {
  SurrogateForcingKind kind = SurrogateForcingKind::None;
  double amplitude = 0.0;
  double period = 1.0;
  Vec2 direction = Vec2::UnitX();

  Vec2 value(double t) const;
};

// Linear added-mass stand-in: traction = -(m_a a_s + c_a v_s) + f0(t) per
// unit interface length, with perfect kinematic compliance v^f = v^s.
struct SurrogateFluidParams {
  double added_mass = 0.0;     // m_a, per unit interface length
  double added_damping = 0.0;  // c_a
  SurrogateForcing forcing;

  void validate() const;
};

class SurrogateFluid : public FluidSubproblem {
 public:
  explicit SurrogateFluid(SurrogateFluidParams params);

  FluidState initial_state() const override;

  std::pair<FluidState, InterfaceExchange> advance(const FluidState& state_n,
                                                   const InterfaceGeometry& iface,
                                                   const std::vector<Vec2>& v_s,
                                                   const std::vector<Vec2>& a_s, double t_next,
                                                   double dt,
                                                   const FluidState* hint) const override;

  const SurrogateFluidParams& params() const { return params_; }

 private:
  SurrogateFluidParams params_;
};

}  // namespace fsilab
