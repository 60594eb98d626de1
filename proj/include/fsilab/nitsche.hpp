#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "fsilab/fluid.hpp"
#include "fsilab/geometry.hpp"

namespace fsilab {

using SpMat = Eigen::SparseMatrix<double>;

enum class VelocityTreatment { Explicit, Implicit };

// All knobs of the partitioned schemes. Validated on construction via
// validate(); ranges follow the algorithm definitions.
struct CouplingConfig {
  double gamma_n1 = 0.0;                                    // Nitsche penalty, >= 0
  double gamma_n2 = -1.0;                                   // -1 unsymmetric, +1 symmetric
  double beta = 0.1;                                        // relaxation factor, (0, 1]
  int k_max = 1;                                            // fixed sub-iterations per step
  double dt = 0.0;                                          // time step, > 0
  VelocityTreatment treatment = VelocityTreatment::Explicit;
  double early_exit_tol = 0.0;                              // 0 disables early exit

  void validate() const;
};

// Interface force split of the Robin traction on the solid.
struct InterfaceForceSplit {
  Eigen::VectorXd f_ext1;  // fluid traction contribution
  Eigen::VectorXd f_ext2;  // penalty velocity-mismatch contribution
};

// F_ext1 = - int N^T [sigma^f . n^f] dGamma, assembled to solid dofs.
Eigen::VectorXd assemble_f_ext1(const InterfaceGeometry& geom, const InterfaceExchange& exchange,
                                int solid_num_dofs);

// F_ext2 = - gamma_n1 int N^T [v^s - v^f] dGamma.
Eigen::VectorXd assemble_f_ext2(const InterfaceGeometry& geom, const std::vector<Vec2>& v_s,
                                const std::vector<Vec2>& v_f, double gamma_n1,
                                int solid_num_dofs);

// Interface mass matrix M_fs = gamma_n1 int N^T N dGamma (the artificial
// damping of the implicit velocity treatment).
SpMat assemble_interface_mass(const InterfaceGeometry& geom, double gamma_n1, int solid_num_dofs);

// Robin traction sigma^s . n^s = -sigma^f . n^f - gamma_n1 [v^s - v^f],
// evaluated per quadrature sample (diagnostics).
std::vector<Vec2> robin_traction(const InterfaceExchange& exchange, const std::vector<Vec2>& v_s,
                                 double gamma_n1);

}  // namespace fsilab
