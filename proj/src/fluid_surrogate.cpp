#include <cmath>
#include <stdexcept>

#include "fsilab/fluid.hpp"

namespace fsilab {

void FluidProperties::validate() const {
  if (!(density > 0.0)) throw std::invalid_argument("fluid: density must be positive");
  if (!(viscosity > 0.0)) throw std::invalid_argument("fluid: viscosity must be positive");
}

Vec2 SurrogateForcing::value(double t) const {
  switch (kind) {
    case SurrogateForcingKind::None:
      return Vec2::Zero();
    case SurrogateForcingKind::Constant:
      return amplitude * direction;
    case SurrogateForcingKind::Sine:
      return amplitude * std::sin(2.0 * M_PI * t / period) * direction;
  }
  return Vec2::Zero();
}

void SurrogateFluidParams::validate() const {
  if (added_mass < 0.0) throw std::invalid_argument("surrogate: added mass must be >= 0");
  if (added_damping < 0.0) throw std::invalid_argument("surrogate: added damping must be >= 0");
  if (forcing.kind == SurrogateForcingKind::Sine && !(forcing.period > 0.0))
    throw std::invalid_argument("surrogate: forcing period must be positive");
}

SurrogateFluid::SurrogateFluid(SurrogateFluidParams params) : params_(std::move(params)) {
  params_.validate();
}

FluidState SurrogateFluid::initial_state() const { return FluidState{}; }

std::pair<FluidState, InterfaceExchange> SurrogateFluid::advance(
    const FluidState& state_n, const InterfaceGeometry& iface, const std::vector<Vec2>& v_s,
    const std::vector<Vec2>& a_s, double t_next, double /*dt*/, const FluidState*) const {
  const std::size_t n = static_cast<std::size_t>(iface.num_samples());
  if (v_s.size() != n || a_s.size() != n)
    throw std::invalid_argument("surrogate_step: sample layout mismatch");

  InterfaceExchange exchange;
  exchange.traction.reserve(n);
  exchange.velocity.reserve(n);
  const Vec2 f0 = params_.forcing.value(t_next);
  for (std::size_t s = 0; s < n; ++s) {
    exchange.traction.push_back(-(params_.added_mass * a_s[s] + params_.added_damping * v_s[s]) +
                                f0);
    exchange.velocity.push_back(v_s[s]);
  }
  FluidState next = state_n;
  next.t = t_next;
  return {std::move(next), std::move(exchange)};
}

}  // namespace fsilab
