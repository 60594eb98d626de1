#include "fsilab/fluid_ns.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "fsilab/errors.hpp"

namespace fsilab {

double InletProfile::value(double y, double t) const {
  const double factor = pulsatile ? bias + std::sin(2.0 * M_PI * t / period) : 1.0;
  return scale * y * (height - y) * factor;
}

NavierStokesFluid::NavierStokesFluid(int nx, int ny, const Vec2& origin, const Vec2& extent,
                                     const FluidProperties& props, const ChannelBc& bc,
                                     double gamma_n1, double gamma_n2,
                                     const PicardOptions& picard, AssemblyMode mode,
                                     bool include_convection)
    : grid_(build_structured_quad_mesh(nx, ny, origin, extent)),
      nx_(nx),
      ny_(ny),
      origin_(origin),
      extent_(extent),
      hx_(extent.x() / nx),
      hy_(extent.y() / ny),
      props_(props),
      bc_(bc),
      gamma_n1_(gamma_n1),
      gamma_n2_(gamma_n2),
      picard_(picard),
      mode_(mode),
      include_convection_(include_convection) {
  props_.validate();
  if (gamma_n1_ < 0.0) throw std::invalid_argument("fluid: gamma_n1 must be >= 0");
  if (gamma_n2_ != 1.0 && gamma_n2_ != -1.0)
    throw std::invalid_argument("fluid: gamma_n2 must be -1 or +1");

  has_outflow_ = bc_.left.kind == SideKind::Outflow || bc_.right.kind == SideKind::Outflow ||
                 bc_.bottom.kind == SideKind::Outflow || bc_.top.kind == SideKind::Outflow;

  const double g = 1.0 / std::sqrt(3.0);
  const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  for (int q = 0; q < 4; ++q) {
    qp_[q].weight_detj = hx_ * hy_ / 4.0;
    shape_at(pts[q][0], pts[q][1], qp_[q].N, qp_[q].g);
  }
}

void NavierStokesFluid::shape_at(double xi, double eta, Eigen::Vector4d& N,
                                 Eigen::Matrix<double, 4, 2>& g) const {
  N << 0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta), 0.25 * (1 + xi) * (1 + eta),
      0.25 * (1 - xi) * (1 + eta);
  const double ax = 2.0 / hx_, ay = 2.0 / hy_;
  g << -0.25 * (1 - eta) * ax, -0.25 * (1 - xi) * ay,
        0.25 * (1 - eta) * ax, -0.25 * (1 + xi) * ay,
        0.25 * (1 + eta) * ax,  0.25 * (1 + xi) * ay,
       -0.25 * (1 + eta) * ax,  0.25 * (1 - xi) * ay;
}

NavierStokesFluid::Located NavierStokesFluid::locate(const Vec2& x) const {
  int i = static_cast<int>(std::floor((x.x() - origin_.x()) / hx_));
  int j = static_cast<int>(std::floor((x.y() - origin_.y()) / hy_));
  i = std::clamp(i, 0, nx_ - 1);
  j = std::clamp(j, 0, ny_ - 1);
  Located loc;
  loc.element = j * nx_ + i;
  loc.xi = 2.0 * (x.x() - origin_.x() - (i + 0.5) * hx_) / hx_;
  loc.eta = 2.0 * (x.y() - origin_.y() - (j + 0.5) * hy_) / hy_;
  return loc;
}

FluidState NavierStokesFluid::initial_state() const {
  FluidState s;
  s.v = Eigen::VectorXd::Zero(2 * grid_.num_nodes());
  s.p = Eigen::VectorXd::Zero(grid_.num_nodes());
  return s;
}

void NavierStokesFluid::dirichlet_values(double t_next, std::vector<char>& is_bc,
                                         std::vector<double>& bc_val) const {
  is_bc.assign(num_dofs(), 0);
  bc_val.assign(num_dofs(), 0.0);

  auto apply = [&](int node, const SideBc& side) {
    const double y = grid_.nodes[node].y();
    switch (side.kind) {
      case SideKind::Wall:
        is_bc[velocity_dof(node, 0)] = 1;
        bc_val[velocity_dof(node, 0)] = 0.0;
        is_bc[velocity_dof(node, 1)] = 1;
        bc_val[velocity_dof(node, 1)] = 0.0;
        break;
      case SideKind::Slip:
        is_bc[velocity_dof(node, 1)] = 1;
        bc_val[velocity_dof(node, 1)] = 0.0;
        break;
      case SideKind::Inlet:
        is_bc[velocity_dof(node, 0)] = 1;
        bc_val[velocity_dof(node, 0)] = bc_.inlet.value(y, t_next);
        is_bc[velocity_dof(node, 1)] = 1;
        bc_val[velocity_dof(node, 1)] = 0.0;
        break;
      case SideKind::Lid:
        is_bc[velocity_dof(node, 0)] = 1;
        bc_val[velocity_dof(node, 0)] = side.lid_speed;
        is_bc[velocity_dof(node, 1)] = 1;
        bc_val[velocity_dof(node, 1)] = 0.0;
        break;
      case SideKind::Outflow:
        break;
    }
  };

  auto nid = [this](int i, int j) { return j * (nx_ + 1) + i; };
  for (int i = 0; i <= nx_; ++i) apply(nid(i, 0), bc_.bottom);
  for (int i = 0; i <= nx_; ++i) apply(nid(i, ny_), bc_.top);
  for (int j = 0; j <= ny_; ++j) apply(nid(0, j), bc_.left);
  for (int j = 0; j <= ny_; ++j) apply(nid(nx_, j), bc_.right);

  if (!has_outflow_) is_bc[pressure_dof(0)] = 1;  // pressure gauge
}

void NavierStokesFluid::assemble_system(const Eigen::VectorXd& v_n,
                                        const Eigen::VectorXd& v_picard,
                                        const InterfaceGeometry* iface,
                                        const std::vector<Vec2>* v_s, double t_next, double dt,
                                        SpMat& matrix, Eigen::VectorXd& rhs) const {
  const int nn = grid_.num_nodes();
  const int ne = grid_.num_elements();
  if (v_n.size() != 2 * nn || v_picard.size() != 2 * nn)
    throw std::invalid_argument("assemble_ns_system: velocity vector size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("assemble_ns_system: dt must be positive");

  const double rho = props_.density;
  const double mu = props_.viscosity;
  const double nu = mu / rho;
  const double h = std::sqrt(hx_ * hx_ + hy_ * hy_);
  const Vec2 f = props_.body_force;

  // Local dof order: [vx0 vy0 ... vx3 vy3 p0 .. p3].
  struct ElementLocal {
    Eigen::Matrix<double, 12, 12> K;
    Eigen::Matrix<double, 12, 1> f;
  };
  std::vector<ElementLocal> local(ne);

  parallel_for(ne, mode_, [&](int e) {
    ElementLocal& L = local[e];
    L.K.setZero();
    L.f.setZero();
    const auto& elem = grid_.elements[e];

    for (const auto& qp : qp_) {
      Vec2 vbar = Vec2::Zero(), vn = Vec2::Zero();
      for (int a = 0; a < 4; ++a) {
        vbar += qp.N[a] * Vec2(v_picard[2 * elem[a]], v_picard[2 * elem[a] + 1]);
        vn += qp.N[a] * Vec2(v_n[2 * elem[a]], v_n[2 * elem[a] + 1]);
      }

      // tau = ((2/dt)^2 + (2|v|/h)^2 + (4 nu/h^2)^2)^(-1/2), shared by
      // SUPG and PSPG.
      const double tau =
          1.0 / std::sqrt(std::pow(2.0 / dt, 2) +
                          std::pow(2.0 * vbar.norm() / h, 2) + std::pow(4.0 * nu / (h * h), 2));

      const double w = qp.weight_detj;
      Eigen::Vector4d conv = Eigen::Vector4d::Zero();
      if (include_convection_)
        for (int b = 0; b < 4; ++b) conv[b] = vbar.dot(qp.g.row(b).transpose());

      for (int a = 0; a < 4; ++a) {
        const Eigen::Vector2d ga = qp.g.row(a).transpose();
        const double supg_a = include_convection_ ? tau * vbar.dot(ga) : 0.0;
        for (int b = 0; b < 4; ++b) {
          const Eigen::Vector2d gb = qp.g.row(b).transpose();
          const double mass_conv = rho * (qp.N[b] / dt + conv[b]);
          const double avv = w * (qp.N[a] * mass_conv + mu * ga.dot(gb) + supg_a * mass_conv);
          for (int i = 0; i < 2; ++i) {
            L.K(2 * a + i, 2 * b + i) += avv;
            // pressure gradient (Galerkin integrated by parts + SUPG residual form)
            L.K(2 * a + i, 8 + b) += w * (-ga[i] * qp.N[b] + supg_a * gb[i]);
            // continuity + PSPG momentum part
            L.K(8 + a, 2 * b + i) += w * (qp.N[a] * gb[i] + (tau / rho) * ga[i] * mass_conv);
          }
          // PSPG pressure block
          L.K(8 + a, 8 + b) += w * (tau / rho) * ga.dot(gb);
        }
        for (int i = 0; i < 2; ++i)
          L.f(2 * a + i) +=
              w * ((qp.N[a] + supg_a) * (rho * vn[i] / dt + f[i]));
        L.f(8 + a) += w * (tau / rho) * ga.dot(rho * vn / dt + f);
      }
    }
  });

  std::vector<char> is_bc;
  std::vector<double> bc_val;
  dirichlet_values(t_next, is_bc, bc_val);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ne) * 150);
  rhs = Eigen::VectorXd::Zero(num_dofs());

  auto global_dof = [&](const std::array<int, 4>& elem, int local_idx) {
    if (local_idx < 8) return velocity_dof(elem[local_idx / 2], local_idx % 2);
    return pressure_dof(elem[local_idx - 8]);
  };

  auto scatter = [&](int r, int c, double val) {
    if (val == 0.0) return;
    if (is_bc[r]) return;
    if (is_bc[c]) {
      rhs[r] -= val * bc_val[c];
      return;
    }
    trips.emplace_back(r, c, val);
  };

  for (int e = 0; e < ne; ++e) {
    const auto& elem = grid_.elements[e];
    for (int li = 0; li < 12; ++li) {
      const int r = global_dof(elem, li);
      if (!is_bc[r]) rhs[r] += local[e].f(li);
      for (int lj = 0; lj < 12; ++lj) scatter(r, global_dof(elem, lj), local[e].K(li, lj));
    }
  }

  // Nitsche terms on the immersed interface (n points out of the fluid's
  // far side, i.e. n^f = -n^s).
  if (iface && iface->num_samples() > 0) {
    if (!v_s || static_cast<int>(v_s->size()) != iface->num_samples())
      throw std::invalid_argument("assemble_ns_system: interface sample layout mismatch");
    const int q = iface->mesh->quadrature_order;
    for (int s = 0; s < iface->num_samples(); ++s) {
      const Vec2 n = -iface->normals[s / q];
      const double w = iface->sample_weights[s];
      const Vec2 vs = (*v_s)[s];
      const Located loc = locate(iface->sample_points[s]);
      const auto& elem = grid_.elements[loc.element];
      Eigen::Vector4d N;
      Eigen::Matrix<double, 4, 2> g;
      shape_at(loc.xi, loc.eta, N, g);

      for (int a = 0; a < 4; ++a) {
        const double gan = g.row(a).dot(n);
        for (int b = 0; b < 4; ++b) {
          const double gbn = g.row(b).dot(n);
          for (int i = 0; i < 2; ++i) {
            const int r = velocity_dof(elem[a], i);
            // penalty + consistency + adjoint (velocity rows)
            scatter(r, velocity_dof(elem[b], i),
                    w * (gamma_n1_ * N[a] * N[b] - mu * N[a] * gbn - gamma_n2_ * mu * gan * N[b]));
            scatter(r, pressure_dof(elem[b]), w * N[a] * N[b] * n[i]);
            // adjoint (pressure rows)
            scatter(pressure_dof(elem[a]), velocity_dof(elem[b], i),
                    w * gamma_n2_ * N[a] * N[b] * n[i]);
          }
        }
        for (int i = 0; i < 2; ++i) {
          const int r = velocity_dof(elem[a], i);
          if (!is_bc[r]) rhs[r] += w * (gamma_n1_ * N[a] - gamma_n2_ * mu * gan) * vs[i];
        }
        const int rp = pressure_dof(elem[a]);
        if (!is_bc[rp]) rhs[rp] += w * gamma_n2_ * N[a] * n.dot(vs);
      }
    }
  }

  for (int dof = 0; dof < num_dofs(); ++dof)
    if (is_bc[dof]) {
      trips.emplace_back(dof, dof, 1.0);
      rhs[dof] = bc_val[dof];
    }

  matrix.resize(num_dofs(), num_dofs());
  matrix.setFromTriplets(trips.begin(), trips.end());
}

std::pair<FluidState, InterfaceExchange> NavierStokesFluid::advance(
    const FluidState& state_n, const InterfaceGeometry& iface, const std::vector<Vec2>& v_s,
    const std::vector<Vec2>& /*a_s*/, double t_next, double dt, const FluidState* hint) const {
  const InterfaceGeometry* geom = iface.num_samples() > 0 ? &iface : nullptr;
  const std::vector<Vec2>* vs = geom ? &v_s : nullptr;

  Eigen::VectorXd v_bar = hint ? hint->v : state_n.v;
  FluidState next;
  next.t = t_next;

  SpMat A;
  Eigen::VectorXd b;
  std::vector<double> change_history;
  bool converged = false;
  for (int it = 0; it < picard_.max_iterations; ++it) {
    assemble_system(state_n.v, v_bar, geom, vs, t_next, dt, A, b);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("ns_step: singular fluid system");
    const Eigen::VectorXd x = lu.solve(b);

    Eigen::VectorXd v_new = x.head(2 * grid_.num_nodes());
    const double change = (v_new - v_bar).lpNorm<Eigen::Infinity>();
    const double scale = std::max(v_new.lpNorm<Eigen::Infinity>(), 1e-30);
    change_history.push_back(change / scale);
    v_bar = v_new;
    if (!include_convection_ || change <= picard_.tol * scale) {
      next.v = std::move(v_new);
      next.p = x.tail(grid_.num_nodes());
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergenceError("ns_step: Picard iteration did not converge", change_history);

  InterfaceExchange exchange;
  if (geom) {
    const int q = iface.mesh->quadrature_order;
    exchange.traction.reserve(iface.num_samples());
    exchange.velocity.reserve(iface.num_samples());
    for (int s = 0; s < iface.num_samples(); ++s) {
      const Vec2 nf = -iface.normals[s / q];
      exchange.traction.push_back(traction_at(next, iface.sample_points[s], nf));
      exchange.velocity.push_back(velocity_at(next, iface.sample_points[s]));
    }
  }
  return {std::move(next), std::move(exchange)};
}

Vec2 NavierStokesFluid::velocity_at(const FluidState& state, const Vec2& x) const {
  const Located loc = locate(x);
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> g;
  shape_at(loc.xi, loc.eta, N, g);
  const auto& elem = grid_.elements[loc.element];
  Vec2 v = Vec2::Zero();
  for (int a = 0; a < 4; ++a)
    v += N[a] * Vec2(state.v[2 * elem[a]], state.v[2 * elem[a] + 1]);
  return v;
}

double NavierStokesFluid::pressure_at(const FluidState& state, const Vec2& x) const {
  const Located loc = locate(x);
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> g;
  shape_at(loc.xi, loc.eta, N, g);
  const auto& elem = grid_.elements[loc.element];
  double p = 0.0;
  for (int a = 0; a < 4; ++a) p += N[a] * state.p[elem[a]];
  return p;
}

Eigen::Matrix2d NavierStokesFluid::velocity_gradient_at(const FluidState& state,
                                                        const Vec2& x) const {
  const Located loc = locate(x);
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> g;
  shape_at(loc.xi, loc.eta, N, g);
  const auto& elem = grid_.elements[loc.element];
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // grad(i,j) = dv_i/dx_j
  for (int a = 0; a < 4; ++a) {
    const Vec2 va(state.v[2 * elem[a]], state.v[2 * elem[a] + 1]);
    grad += va * g.row(a);
  }
  return grad;
}

Vec2 NavierStokesFluid::traction_at(const FluidState& state, const Vec2& x, const Vec2& n) const {
  return props_.viscosity * velocity_gradient_at(state, x) * n - pressure_at(state, x) * n;
}

double NavierStokesFluid::boundary_flux(const FluidState& state) const {
  double flux = 0.0;
  for (const auto& [name, edges] : grid_.boundary_tags) {
    (void)name;
    for (const auto& e : edges) {
      const Vec2 p0 = grid_.nodes[e.n0], p1 = grid_.nodes[e.n1];
      const Vec2 t = p1 - p0;
      const Vec2 n(t.y(), -t.x());  // outward, length-scaled
      const Vec2 v0(state.v[2 * e.n0], state.v[2 * e.n0 + 1]);
      const Vec2 v1(state.v[2 * e.n1], state.v[2 * e.n1 + 1]);
      flux += 0.5 * (v0 + v1).dot(n);
    }
  }
  return flux;
}

}  // namespace fsilab
