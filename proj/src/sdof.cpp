#include "fsilab/sdof.hpp"

#include <cmath>
#include <stdexcept>

#include "fsilab/errors.hpp"

namespace fsilab {

void SdofParams::validate() const {
  if (!(m_ss > 0.0)) throw std::invalid_argument("sdof: mass must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("sdof: stiffness must be positive");
  if (c < 0.0) throw std::invalid_argument("sdof: damping must be non-negative");
  if (m_fs < 0.0) throw std::invalid_argument("sdof: m_fs must be non-negative");
}

SdofStep step_sdof(const SdofParams& p, double d_n, double v_n, double t_n, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_sdof: dt must be positive");
  // BDF1 kinematics: v_{n+1} = (d_{n+1} - d_n)/dt, a_{n+1} = (v_{n+1} - v_n)/dt.
  const double lhs = p.m_ss / (dt * dt) + (p.c + p.m_fs) / dt + p.k;
  const double rhs = p.force(t_n + dt) + p.m_fs * v_n +
                     p.m_ss * (d_n / (dt * dt) + v_n / dt) + (p.c + p.m_fs) * d_n / dt;
  SdofStep next;
  next.d = rhs / lhs;
  next.v = (next.d - d_n) / dt;
  next.a = (next.v - v_n) / dt;
  return next;
}

double analytic_reference(const SdofParams& p, double force, double t) {
  const double disc = p.c * p.c - 4.0 * p.m_ss * p.k;
  if (disc >= 0.0)
    throw UnsupportedRegimeError("analytic_reference: only the underdamped regime is supported");
  const double omega_n = std::sqrt(p.k / p.m_ss);
  const double zeta = p.c / (2.0 * std::sqrt(p.k * p.m_ss));
  const double omega_d = omega_n * std::sqrt(1.0 - zeta * zeta);
  const double d_inf = force / p.k;
  const double decay = std::exp(-zeta * omega_n * t);
  return d_inf * (1.0 - decay * (std::cos(omega_d * t) +
                                 zeta * omega_n / omega_d * std::sin(omega_d * t)));
}

}  // namespace fsilab
