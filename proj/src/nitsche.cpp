#include "fsilab/nitsche.hpp"

#include <stdexcept>

namespace fsilab {

void CouplingConfig::validate() const {
  if (gamma_n1 < 0.0) throw std::invalid_argument("coupling: gamma_n1 must be >= 0");
  if (gamma_n2 != -1.0 && gamma_n2 != 1.0)
    throw std::invalid_argument("coupling: gamma_n2 must be -1 or +1");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("coupling: beta must lie in (0, 1]");
  if (k_max < 1) throw std::invalid_argument("coupling: k_max must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("coupling: dt must be positive");
  if (early_exit_tol < 0.0)
    throw std::invalid_argument("coupling: early_exit_tol must be >= 0");
}

namespace {

void check_layout(const InterfaceGeometry& geom, std::size_t samples, const char* op) {
  if (samples != static_cast<std::size_t>(geom.num_samples()))
    throw std::invalid_argument(std::string(op) + ": sample layout mismatch");
}

}  // namespace

Eigen::VectorXd assemble_f_ext1(const InterfaceGeometry& geom, const InterfaceExchange& exchange,
                                int solid_num_dofs) {
  check_layout(geom, exchange.traction.size(), "assemble_f_ext1");
  const InterfaceMesh& iface = *geom.mesh;
  const int q = iface.quadrature_order;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(solid_num_dofs);
  for (int seg = 0; seg < iface.num_segments(); ++seg) {
    const auto& nodes = iface.segments[seg].nodes;
    for (int k = 0; k < q; ++k) {
      const int s = seg * q + k;
      const double w = geom.sample_weights[s];
      const auto& N = geom.sample_shape[s];
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
          f[2 * nodes[a] + i] -= w * N[a] * exchange.traction[s][i];
    }
  }
  return f;
}

Eigen::VectorXd assemble_f_ext2(const InterfaceGeometry& geom, const std::vector<Vec2>& v_s,
                                const std::vector<Vec2>& v_f, double gamma_n1,
                                int solid_num_dofs) {
  check_layout(geom, v_s.size(), "assemble_f_ext2");
  check_layout(geom, v_f.size(), "assemble_f_ext2");
  const InterfaceMesh& iface = *geom.mesh;
  const int q = iface.quadrature_order;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(solid_num_dofs);
  for (int seg = 0; seg < iface.num_segments(); ++seg) {
    const auto& nodes = iface.segments[seg].nodes;
    for (int k = 0; k < q; ++k) {
      const int s = seg * q + k;
      const double w = geom.sample_weights[s];
      const auto& N = geom.sample_shape[s];
      const Vec2 mismatch = v_s[s] - v_f[s];
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
          f[2 * nodes[a] + i] -= w * gamma_n1 * N[a] * mismatch[i];
    }
  }
  return f;
}

SpMat assemble_interface_mass(const InterfaceGeometry& geom, double gamma_n1,
                              int solid_num_dofs) {
  if (gamma_n1 < 0.0) throw std::invalid_argument("assemble_interface_mass: gamma_n1 must be >= 0");
  const InterfaceMesh& iface = *geom.mesh;
  const int q = iface.quadrature_order;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(iface.num_segments()) * 8);
  for (int seg = 0; seg < iface.num_segments(); ++seg) {
    const auto& nodes = iface.segments[seg].nodes;
    for (int k = 0; k < q; ++k) {
      const int s = seg * q + k;
      const double w = geom.sample_weights[s];
      const auto& N = geom.sample_shape[s];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int i = 0; i < 2; ++i)
            trips.emplace_back(2 * nodes[a] + i, 2 * nodes[b] + i, gamma_n1 * w * N[a] * N[b]);
    }
  }
  SpMat m(solid_num_dofs, solid_num_dofs);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

std::vector<Vec2> robin_traction(const InterfaceExchange& exchange, const std::vector<Vec2>& v_s,
                                 double gamma_n1) {
  if (exchange.traction.size() != v_s.size() || exchange.velocity.size() != v_s.size())
    throw std::invalid_argument("robin_traction: sample layout mismatch");
  std::vector<Vec2> out;
  out.reserve(v_s.size());
  for (std::size_t s = 0; s < v_s.size(); ++s)
    out.push_back(-exchange.traction[s] - gamma_n1 * (v_s[s] - exchange.velocity[s]));
  return out;
}

}  // namespace fsilab
