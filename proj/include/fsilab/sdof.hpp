#pragma once

#include <functional>

namespace fsilab {

// Spring-mass-damper with the interface damping coefficient m_fs playing
// the Nitsche penalty of the implicit velocity treatment:
//   m_ss a_{n+1} + (c + m_fs) v_{n+1} + k d_{n+1} = f(t_{n+1}) + m_fs v_n
struct SdofParams {
  double m_ss = 1.0;
  double c = 0.0;
  double k = 1.0;
  double m_fs = 0.0;
  std::function<double(double)> f_ext;  // applied force; nullptr means zero

  double force(double t) const { return f_ext ? f_ext(t) : 0.0; }
  void validate() const;
};

struct SdofStep {
  double d, v, a;
};

// One BDF1 step; closed-form linear solve.
SdofStep step_sdof(const SdofParams& params, double d_n, double v_n, double t_n, double dt);

// Exact solution of m d'' + c d' + k d = F (constant F) from rest, for the
// underdamped regime; oracle for the discrete update.
double analytic_reference(const SdofParams& params, double force, double t);

}  // namespace fsilab
