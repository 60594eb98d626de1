#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "fsilab/geometry.hpp"
#include "fsilab/parallel.hpp"

namespace fsilab {

using SpMat = Eigen::SparseMatrix<double>;

// Compressible Neo-Hookean material (plane strain). Lame parameters are
// derived from E and nu on construction.
struct NeoHookeanMaterial {
  double youngs_modulus = 0.0;
  double poisson_ratio = 0.0;
  double density = 0.0;

  double lambda() const {
    return youngs_modulus * poisson_ratio /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
  double mu() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }

  static NeoHookeanMaterial make(double E, double nu, double rho);
};

// Nodal kinematics at one time level; v and a follow BDF1 once a step
// has completed.
struct SolidState {
  Eigen::VectorXd d, v, a;
  double t = 0.0;

  static SolidState zero(int num_dofs, double t0 = 0.0);
};

// Immutable assembled description of the solid sub-problem.
struct SolidSystem {
  QuadMesh mesh;
  NeoHookeanMaterial material;
  std::vector<int> dirichlet_dofs;   // sorted, displacement pinned to zero
  SpMat mass;                        // consistent mass matrix
  std::vector<int> free_index;       // dof -> free index, -1 if constrained
  std::vector<int> free_dofs;
  AssemblyMode assembly_mode = AssemblyMode::Parallel;

  int num_dofs() const { return mesh.num_dofs(); }
};

SolidSystem make_solid_system(QuadMesh mesh, NeoHookeanMaterial material,
                              std::vector<int> dirichlet_dofs,
                              AssemblyMode mode = AssemblyMode::Parallel);

// Cauchy stress sigma = (mu/J)(B - I) + (lambda ln J / J) I.
Eigen::Matrix2d cauchy_stress(const Eigen::Matrix2d& F, const NeoHookeanMaterial& material,
                              int element_id = -1);

// Strain energy density W(F); integrates to the stored energy used by the
// dissipativity checks.
double strain_energy_density(const Eigen::Matrix2d& F, const NeoHookeanMaterial& material);

SpMat assemble_mass(const QuadMesh& mesh, const NeoHookeanMaterial& material,
                    AssemblyMode mode = AssemblyMode::Parallel);

// Internal force and consistent tangent (material + geometric) at the given
// displacement, integrated over the current configuration.
void assemble_internal_force_and_tangent(const SolidSystem& system, const Eigen::VectorXd& d,
                                         Eigen::VectorXd& f_int, SpMat& tangent);

double strain_energy(const SolidSystem& system, const Eigen::VectorXd& d);

struct NewtonOptions {
  double tol = 1e-8;        // relative to the first residual
  double abs_floor = 1e-12;
  int max_iterations = 25;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_history;
};

// One BDF1 step of M a + [M_fs v] + F_int(d) = f_ext solved by Newton on
// the end-of-step displacement. Pass m_fs = nullptr for the unmodified
// solid problem.
SolidState solve_solid_step(const SolidSystem& system, const SolidState& state_n,
                            const Eigen::VectorXd& f_ext, const SpMat* m_fs, double dt,
                            const NewtonOptions& options = {}, NewtonReport* report = nullptr);

}  // namespace fsilab
