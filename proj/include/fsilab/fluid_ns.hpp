#pragma once

#include <Eigen/Sparse>

#include "fsilab/fluid.hpp"
#include "fsilab/parallel.hpp"

namespace fsilab {

using SpMat = Eigen::SparseMatrix<double>;

// Horizontal inlet profile v_x = scale * y * (height - y), optionally
// modulated in time by (bias + sin(2 pi t / period)).
struct InletProfile {
  double scale = 0.0;
  double height = 1.0;
  bool pulsatile = false;
  double bias = 0.0;
  double period = 1.0;

  double value(double y, double t) const;
};

enum class SideKind { Wall, Slip, Inlet, Lid, Outflow };

struct SideBc {
  SideKind kind = SideKind::Wall;
  double lid_speed = 0.0;
};

struct ChannelBc {
  SideBc left, right, bottom, top;
  InletProfile inlet;
};

struct PicardOptions {
  double tol = 1e-6;
  int max_iterations = 15;
};

// Equal-order Q1/Q1 incompressible Navier-Stokes on a fixed Cartesian grid:
// BDF1 in time, Picard linearization of convection, SUPG/PSPG stabilization,
// strong outer-wall conditions, and Nitsche terms enforcing the interface
// velocity constraint on an immersed interface (fictitious-domain style: the
// equations are assembled on all elements, covered or not).
class NavierStokesFluid : public FluidSubproblem {
 public:
  NavierStokesFluid(int nx, int ny, const Vec2& origin, const Vec2& extent,
                    const FluidProperties& props, const ChannelBc& bc, double gamma_n1,
                    double gamma_n2, const PicardOptions& picard = {},
                    AssemblyMode mode = AssemblyMode::Parallel, bool include_convection = true);

  FluidState initial_state() const override;

  std::pair<FluidState, InterfaceExchange> advance(const FluidState& state_n,
                                                   const InterfaceGeometry& iface,
                                                   const std::vector<Vec2>& v_s,
                                                   const std::vector<Vec2>& a_s, double t_next,
                                                   double dt,
                                                   const FluidState* hint) const override;

  // One linearized BDF1 system (a single Picard iterate around v_picard).
  // iface/v_s may be null for flows without an immersed interface.
  void assemble_system(const Eigen::VectorXd& v_n, const Eigen::VectorXd& v_picard,
                       const InterfaceGeometry* iface, const std::vector<Vec2>* v_s,
                       double t_next, double dt, SpMat& matrix, Eigen::VectorXd& rhs) const;

  Vec2 velocity_at(const FluidState& state, const Vec2& x) const;
  double pressure_at(const FluidState& state, const Vec2& x) const;
  Eigen::Matrix2d velocity_gradient_at(const FluidState& state, const Vec2& x) const;
  // Pseudo-stress traction sigma . n = mu grad(v) . n - p n.
  Vec2 traction_at(const FluidState& state, const Vec2& x, const Vec2& n) const;

  // Net volume flux through the outer boundary of the converged field.
  double boundary_flux(const FluidState& state) const;

  const QuadMesh& grid() const { return grid_; }
  int num_nodes() const { return grid_.num_nodes(); }
  int num_dofs() const { return 3 * grid_.num_nodes(); }
  int velocity_dof(int node, int comp) const { return 2 * node + comp; }
  int pressure_dof(int node) const { return 2 * grid_.num_nodes() + node; }

 private:
  struct Located {
    int element;
    double xi, eta;
  };
  Located locate(const Vec2& x) const;
  void shape_at(double xi, double eta, Eigen::Vector4d& N, Eigen::Matrix<double, 4, 2>& g) const;
  void dirichlet_values(double t_next, std::vector<char>& is_bc,
                        std::vector<double>& bc_val) const;

  QuadMesh grid_;
  int nx_, ny_;
  Vec2 origin_, extent_;
  double hx_, hy_;
  FluidProperties props_;
  ChannelBc bc_;
  double gamma_n1_, gamma_n2_;
  PicardOptions picard_;
  AssemblyMode mode_;
  bool include_convection_;
  bool has_outflow_;

  struct QuadPoint {
    double weight_detj;
    Eigen::Vector4d N;
    Eigen::Matrix<double, 4, 2> g;  // spatial gradients, constant on a uniform grid
  };
  std::array<QuadPoint, 4> qp_;
};

}  // namespace fsilab
