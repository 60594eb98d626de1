#include "fsilab/solid.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "fsilab/errors.hpp"

namespace fsilab {

namespace {

// 2x2 Gauss data on the bi-unit quad, precomputed once.
struct QuadPointData {
  double weight;
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dNdxi;
};

const std::array<QuadPointData, 4>& quad_points() {
  static const std::array<QuadPointData, 4> data = [] {
    std::array<QuadPointData, 4> out{};
    const double g = 1.0 / std::sqrt(3.0);
    const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
    for (int q = 0; q < 4; ++q) {
      const double xi = pts[q][0], eta = pts[q][1];
      out[q].weight = 1.0;
      out[q].N << 0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
          0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta);
      out[q].dNdxi << -0.25 * (1 - eta), -0.25 * (1 - xi),
                       0.25 * (1 - eta), -0.25 * (1 + xi),
                       0.25 * (1 + eta),  0.25 * (1 + xi),
                      -0.25 * (1 + eta),  0.25 * (1 - xi);
    }
    return out;
  }();
  return data;
}

struct ElementKinematics {
  Eigen::Matrix<double, 4, 2> grad_ref;  // dN/dX at one quad point
  double detJ = 0.0;
};

ElementKinematics reference_gradients(const QuadMesh& mesh, const std::array<int, 4>& elem,
                                      const QuadPointData& qp) {
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  for (int a = 0; a < 4; ++a) {
    const Vec2& x = mesh.nodes[elem[a]];
    J(0, 0) += qp.dNdxi(a, 0) * x.x();
    J(0, 1) += qp.dNdxi(a, 1) * x.x();
    J(1, 0) += qp.dNdxi(a, 0) * x.y();
    J(1, 1) += qp.dNdxi(a, 1) * x.y();
  }
  ElementKinematics kin;
  kin.detJ = J.determinant();
  const Eigen::Matrix2d Jinv = J.inverse();
  for (int a = 0; a < 4; ++a) {
    const Eigen::Vector2d dxi = qp.dNdxi.row(a).transpose();
    kin.grad_ref.row(a) = (Jinv.transpose() * dxi).transpose();
  }
  return kin;
}

struct ElementContribution {
  Eigen::Matrix<double, 8, 8> K;
  Eigen::Matrix<double, 8, 1> f;
  bool inverted = false;
};

// Internal force and consistent tangent for one element. Updated-Lagrangian
// form: integrals over the reference domain with the Kirchhoff stress
// tau = mu (B - I) + lambda ln J I and spatial gradients F^{-T} dN/dX.
ElementContribution element_force_tangent(const QuadMesh& mesh, const std::array<int, 4>& elem,
                                          const NeoHookeanMaterial& mat,
                                          const Eigen::VectorXd& d) {
  ElementContribution out;
  out.K.setZero();
  out.f.setZero();
  const double mu = mat.mu();
  const double lambda = mat.lambda();

  for (const auto& qp : quad_points()) {
    const ElementKinematics kin = reference_gradients(mesh, elem, qp);

    Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
    for (int a = 0; a < 4; ++a) {
      const Eigen::Vector2d da(d[2 * elem[a]], d[2 * elem[a] + 1]);
      F += da * kin.grad_ref.row(a);
    }
    const double J = F.determinant();
    if (!(J > 0.0)) {
      out.inverted = true;
      return out;
    }

    // Spatial shape gradients.
    const Eigen::Matrix2d FinvT = F.inverse().transpose();
    Eigen::Matrix<double, 4, 2> g;
    for (int a = 0; a < 4; ++a)
      g.row(a) = (FinvT * kin.grad_ref.row(a).transpose()).transpose();

    const double lnJ = std::log(J);
    const Eigen::Matrix2d B = F * F.transpose();
    const Eigen::Matrix2d tau =
        mu * (B - Eigen::Matrix2d::Identity()) + lambda * lnJ * Eigen::Matrix2d::Identity();
    const double mu_hat = mu - lambda * lnJ;
    const double w = qp.weight * kin.detJ;

    for (int a = 0; a < 4; ++a) {
      const Eigen::Vector2d ga = g.row(a).transpose();
      out.f.segment<2>(2 * a) += w * (tau * ga);
      for (int b = 0; b < 4; ++b) {
        const Eigen::Vector2d gb = g.row(b).transpose();
        const double geo = ga.dot(tau * gb);
        const double gab = ga.dot(gb);
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) {
            double v = lambda * ga[i] * gb[k] + mu_hat * ga[k] * gb[i];
            if (i == k) v += mu_hat * gab + geo;
            out.K(2 * a + i, 2 * b + k) += w * v;
          }
      }
    }
  }
  return out;
}

}  // namespace

NeoHookeanMaterial NeoHookeanMaterial::make(double E, double nu, double rho) {
  if (!(E > 0.0)) throw std::invalid_argument("material: Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5))
    throw std::invalid_argument("material: Poisson ratio must lie in (-1, 0.5)");
  if (!(rho > 0.0)) throw std::invalid_argument("material: density must be positive");
  return NeoHookeanMaterial{E, nu, rho};
}

SolidState SolidState::zero(int num_dofs, double t0) {
  SolidState s;
  s.d = Eigen::VectorXd::Zero(num_dofs);
  s.v = Eigen::VectorXd::Zero(num_dofs);
  s.a = Eigen::VectorXd::Zero(num_dofs);
  s.t = t0;
  return s;
}

Eigen::Matrix2d cauchy_stress(const Eigen::Matrix2d& F, const NeoHookeanMaterial& material,
                              int element_id) {
  const double J = F.determinant();
  if (!(J > 0.0))
    throw ElementInversionError(element_id,
                                "cauchy_stress: non-positive deformation gradient determinant");
  const Eigen::Matrix2d B = F * F.transpose();
  return (material.mu() / J) * (B - Eigen::Matrix2d::Identity()) +
         (material.lambda() * std::log(J) / J) * Eigen::Matrix2d::Identity();
}

double strain_energy_density(const Eigen::Matrix2d& F, const NeoHookeanMaterial& material) {
  const double J = F.determinant();
  if (!(J > 0.0))
    throw ElementInversionError(-1, "strain_energy_density: non-positive determinant");
  const double lnJ = std::log(J);
  const double trC = (F.transpose() * F).trace();
  return 0.5 * material.mu() * (trC - 2.0) - material.mu() * lnJ +
         0.5 * material.lambda() * lnJ * lnJ;
}

SpMat assemble_mass(const QuadMesh& mesh, const NeoHookeanMaterial& material, AssemblyMode mode) {
  const int ne = mesh.num_elements();
  std::vector<Eigen::Matrix4d> local(ne);
  parallel_for(ne, mode, [&](int e) {
    Eigen::Matrix4d Me = Eigen::Matrix4d::Zero();
    for (const auto& qp : quad_points()) {
      const ElementKinematics kin = reference_gradients(mesh, mesh.elements[e], qp);
      Me += (material.density * qp.weight * kin.detJ) * (qp.N * qp.N.transpose());
    }
    local[e] = Me;
  });

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ne) * 32);
  for (int e = 0; e < ne; ++e) {
    const auto& elem = mesh.elements[e];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int i = 0; i < 2; ++i)
          trips.emplace_back(2 * elem[a] + i, 2 * elem[b] + i, local[e](a, b));
  }
  SpMat M(mesh.num_dofs(), mesh.num_dofs());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SolidSystem make_solid_system(QuadMesh mesh, NeoHookeanMaterial material,
                              std::vector<int> dirichlet_dofs, AssemblyMode mode) {
  SolidSystem sys;
  sys.mesh = std::move(mesh);
  sys.material = material;
  std::sort(dirichlet_dofs.begin(), dirichlet_dofs.end());
  dirichlet_dofs.erase(std::unique(dirichlet_dofs.begin(), dirichlet_dofs.end()),
                       dirichlet_dofs.end());
  sys.dirichlet_dofs = std::move(dirichlet_dofs);
  sys.assembly_mode = mode;
  sys.mass = assemble_mass(sys.mesh, sys.material, mode);

  sys.free_index.assign(sys.num_dofs(), -1);
  for (int dof : sys.dirichlet_dofs)
    if (dof < 0 || dof >= sys.num_dofs())
      throw std::invalid_argument("make_solid_system: Dirichlet dof out of range");
  std::vector<char> constrained(sys.num_dofs(), 0);
  for (int dof : sys.dirichlet_dofs) constrained[dof] = 1;
  for (int dof = 0; dof < sys.num_dofs(); ++dof)
    if (!constrained[dof]) {
      sys.free_index[dof] = static_cast<int>(sys.free_dofs.size());
      sys.free_dofs.push_back(dof);
    }
  return sys;
}

void assemble_internal_force_and_tangent(const SolidSystem& system, const Eigen::VectorXd& d,
                                         Eigen::VectorXd& f_int, SpMat& tangent) {
  const QuadMesh& mesh = system.mesh;
  if (d.size() != mesh.num_dofs())
    throw std::invalid_argument("assemble_internal_force_and_tangent: displacement size mismatch");
  const int ne = mesh.num_elements();

  if (system.assembly_mode == AssemblyMode::Serial) {
    // Reference path: compute and scatter element by element.
    f_int = Eigen::VectorXd::Zero(mesh.num_dofs());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(ne) * 64);
    for (int e = 0; e < ne; ++e) {
      const ElementContribution c =
          element_force_tangent(mesh, mesh.elements[e], system.material, d);
      if (c.inverted)
        throw ElementInversionError(e, "element " + std::to_string(e) +
                                           " inverted during assembly");
      const auto& elem = mesh.elements[e];
      for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 2; ++i) {
          f_int[2 * elem[a] + i] += c.f(2 * a + i);
          for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 2; ++k)
              trips.emplace_back(2 * elem[a] + i, 2 * elem[b] + k, c.K(2 * a + i, 2 * b + k));
        }
    }
    tangent.resize(mesh.num_dofs(), mesh.num_dofs());
    tangent.setFromTriplets(trips.begin(), trips.end());
    return;
  }

  std::vector<ElementContribution> local(ne);
  parallel_for(ne, AssemblyMode::Parallel,
               [&](int e) { local[e] = element_force_tangent(mesh, mesh.elements[e],
                                                             system.material, d); });
  for (int e = 0; e < ne; ++e)
    if (local[e].inverted)
      throw ElementInversionError(e, "element " + std::to_string(e) + " inverted during assembly");

  f_int = Eigen::VectorXd::Zero(mesh.num_dofs());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ne) * 64);
  for (int e = 0; e < ne; ++e) {
    const auto& elem = mesh.elements[e];
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 2; ++i) {
        f_int[2 * elem[a] + i] += local[e].f(2 * a + i);
        for (int b = 0; b < 4; ++b)
          for (int k = 0; k < 2; ++k)
            trips.emplace_back(2 * elem[a] + i, 2 * elem[b] + k, local[e].K(2 * a + i, 2 * b + k));
      }
  }
  tangent.resize(mesh.num_dofs(), mesh.num_dofs());
  tangent.setFromTriplets(trips.begin(), trips.end());
}

double strain_energy(const SolidSystem& system, const Eigen::VectorXd& d) {
  const QuadMesh& mesh = system.mesh;
  double energy = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& elem = mesh.elements[e];
    for (const auto& qp : quad_points()) {
      const ElementKinematics kin = reference_gradients(mesh, elem, qp);
      Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
      for (int a = 0; a < 4; ++a) {
        const Eigen::Vector2d da(d[2 * elem[a]], d[2 * elem[a] + 1]);
        F += da * kin.grad_ref.row(a);
      }
      energy += qp.weight * kin.detJ * strain_energy_density(F, system.material);
    }
  }
  return energy;
}

namespace {

// Restricts a square sparse matrix to the free dofs of the system.
SpMat reduce_to_free(const SolidSystem& sys, const SpMat& A) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nonZeros());
  for (int col = 0; col < A.outerSize(); ++col) {
    const int cf = sys.free_index[col];
    if (cf < 0) continue;
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      const int rf = sys.free_index[it.row()];
      if (rf >= 0) trips.emplace_back(rf, cf, it.value());
    }
  }
  SpMat R(static_cast<int>(sys.free_dofs.size()), static_cast<int>(sys.free_dofs.size()));
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

}  // namespace

SolidState solve_solid_step(const SolidSystem& system, const SolidState& state_n,
                            const Eigen::VectorXd& f_ext, const SpMat* m_fs, double dt,
                            const NewtonOptions& options, NewtonReport* report) {
  if (!(dt > 0.0)) throw std::invalid_argument("solve_solid_step: dt must be positive");
  if (f_ext.size() != system.num_dofs())
    throw std::invalid_argument("solve_solid_step: external force size mismatch");

  const double inv_dt = 1.0 / dt;
  Eigen::VectorXd d = state_n.d;
  Eigen::VectorXd f_int;
  SpMat K;
  std::vector<double> residuals;
  double tol_eff = options.abs_floor;

  for (int it = 0; it <= options.max_iterations; ++it) {
    assemble_internal_force_and_tangent(system, d, f_int, K);
    const Eigen::VectorXd v = (d - state_n.d) * inv_dt;
    const Eigen::VectorXd a = (v - state_n.v) * inv_dt;
    Eigen::VectorXd residual = system.mass * a + f_int - f_ext;
    if (m_fs) residual += (*m_fs) * v;

    double norm2 = 0.0;
    for (int dof : system.free_dofs) norm2 += residual[dof] * residual[dof];
    const double norm = std::sqrt(norm2);
    residuals.push_back(norm);
    if (it == 0) tol_eff = std::max(options.tol * norm, options.abs_floor);
    if (norm <= tol_eff) {
      if (report) {
        report->iterations = it;
        report->residual_history = residuals;
      }
      SolidState next;
      next.d = d;
      next.v = v;
      next.a = a;
      next.t = state_n.t + dt;
      return next;
    }
    if (it == options.max_iterations) break;

    SpMat jac = K;
    jac += (inv_dt * inv_dt) * system.mass;
    if (m_fs) jac += inv_dt * (*m_fs);
    SpMat jac_ff = reduce_to_free(system, jac);

    Eigen::SparseLU<SpMat> lu;
    lu.compute(jac_ff);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve_solid_step: singular Newton system");
    Eigen::VectorXd rhs(system.free_dofs.size());
    for (std::size_t i = 0; i < system.free_dofs.size(); ++i)
      rhs[static_cast<int>(i)] = -residual[system.free_dofs[i]];
    const Eigen::VectorXd delta = lu.solve(rhs);
    for (std::size_t i = 0; i < system.free_dofs.size(); ++i)
      d[system.free_dofs[i]] += delta[static_cast<int>(i)];
  }

  throw NonConvergenceError("solve_solid_step: Newton did not converge in " +
                                std::to_string(options.max_iterations) + " iterations",
                            residuals);
}

}  // namespace fsilab
