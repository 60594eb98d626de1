#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "fsilab/nitsche.hpp"

using namespace fsilab;

namespace {

// One horizontal unit segment: the top edge of a unit-square element.
struct UnitSegmentFixture {
  QuadMesh mesh = build_structured_quad_mesh(1, 1, {0, 0}, {1, 1});
  InterfaceMesh iface = extract_interface(mesh, {"top"});
  InterfaceGeometry geom = interface_geometry(iface, mesh, Eigen::VectorXd());
};

std::vector<Vec2> constant_samples(const InterfaceGeometry& geom, const Vec2& value) {
  return std::vector<Vec2>(geom.num_samples(), value);
}

}  // namespace

TEST_CASE("coupling config validation") {
  CouplingConfig config;
  config.gamma_n1 = 100.0;
  config.beta = 0.1;
  config.k_max = 2;
  config.dt = 0.02;
  CHECK_NOTHROW(config.validate());

  auto expect_invalid = [](CouplingConfig c) { CHECK_THROWS_AS(c.validate(), std::invalid_argument); };
  CouplingConfig bad = config;
  bad.gamma_n1 = -1.0;
  expect_invalid(bad);
  bad = config;
  bad.gamma_n2 = 0.5;
  expect_invalid(bad);
  bad = config;
  bad.beta = 0.0;
  expect_invalid(bad);
  bad = config;
  bad.beta = 1.5;
  expect_invalid(bad);
  bad = config;
  bad.k_max = 0;
  expect_invalid(bad);
  bad = config;
  bad.dt = 0.0;
  expect_invalid(bad);
}

TEST_CASE("f_ext1: zero and constant traction") {
  UnitSegmentFixture fx;
  InterfaceExchange exchange;
  exchange.traction = constant_samples(fx.geom, Vec2::Zero());
  exchange.velocity = constant_samples(fx.geom, Vec2::Zero());
  CHECK(assemble_f_ext1(fx.geom, exchange, fx.mesh.num_dofs()).norm() == doctest::Approx(0.0));

  // Constant traction t on a unit segment loads each end node with -t/2.
  const Vec2 t_bar(2.0, -3.0);
  exchange.traction = constant_samples(fx.geom, t_bar);
  const Eigen::VectorXd f = assemble_f_ext1(fx.geom, exchange, fx.mesh.num_dofs());
  for (int a = 0; a < 2; ++a) {
    const int node = fx.iface.segments[0].nodes[a];
    CHECK(f[2 * node] == doctest::Approx(-t_bar.x() / 2).epsilon(1e-14));
    CHECK(f[2 * node + 1] == doctest::Approx(-t_bar.y() / 2).epsilon(1e-14));
  }

  // Support: nothing lands on nodes off the interface.
  for (int n = 0; n < fx.mesh.num_nodes(); ++n) {
    if (n == fx.iface.segments[0].nodes[0] || n == fx.iface.segments[0].nodes[1]) continue;
    CHECK(f[2 * n] == 0.0);
    CHECK(f[2 * n + 1] == 0.0);
  }

  exchange.traction.pop_back();
  CHECK_THROWS_AS(assemble_f_ext1(fx.geom, exchange, fx.mesh.num_dofs()), std::invalid_argument);
}

TEST_CASE("f_ext2: matched velocities, zero penalty, constant mismatch") {
  UnitSegmentFixture fx;
  const auto v = constant_samples(fx.geom, Vec2(0.4, -0.1));
  CHECK(assemble_f_ext2(fx.geom, v, v, 250.0, fx.mesh.num_dofs()).norm() == doctest::Approx(0.0));

  const auto v_f = constant_samples(fx.geom, Vec2(0.1, -0.1));
  CHECK(assemble_f_ext2(fx.geom, v, v_f, 0.0, fx.mesh.num_dofs()).norm() == doctest::Approx(0.0));

  // gamma = 100, constant mismatch dv: each node receives -100 dv / 2.
  const Eigen::VectorXd f = assemble_f_ext2(fx.geom, v, v_f, 100.0, fx.mesh.num_dofs());
  const Vec2 dv = Vec2(0.4, -0.1) - Vec2(0.1, -0.1);
  for (int a = 0; a < 2; ++a) {
    const int node = fx.iface.segments[0].nodes[a];
    CHECK(f[2 * node] == doctest::Approx(-100.0 * dv.x() / 2).epsilon(1e-13));
    CHECK(f[2 * node + 1] == doctest::Approx(-100.0 * dv.y() / 2).epsilon(1e-13));
  }
}

TEST_CASE("interface mass matrix") {
  UnitSegmentFixture fx;
  CHECK(assemble_interface_mass(fx.geom, 0.0, fx.mesh.num_dofs()).norm() == doctest::Approx(0.0));

  // Unit segment, gamma = 1: the per-direction block is [[1/3,1/6],[1/6,1/3]].
  const SpMat m = assemble_interface_mass(fx.geom, 1.0, fx.mesh.num_dofs());
  const int n0 = fx.iface.segments[0].nodes[0];
  const int n1 = fx.iface.segments[0].nodes[1];
  for (int i = 0; i < 2; ++i) {
    CHECK(m.coeff(2 * n0 + i, 2 * n0 + i) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(m.coeff(2 * n1 + i, 2 * n1 + i) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(m.coeff(2 * n0 + i, 2 * n1 + i) == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(m.coeff(2 * n1 + i, 2 * n0 + i) == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }

  // Linearity in gamma.
  const SpMat m100 = assemble_interface_mass(fx.geom, 100.0, fx.mesh.num_dofs());
  const SpMat m200 = assemble_interface_mass(fx.geom, 200.0, fx.mesh.num_dofs());
  CHECK((SpMat(m200 - 2.0 * m100)).norm() == doctest::Approx(0.0).epsilon(1e-15));

  // Symmetry and positive semidefiniteness on a multi-segment interface.
  const QuadMesh beam = build_structured_quad_mesh(2, 5, {0, 0}, {0.2, 1.0});
  const InterfaceMesh iface = extract_interface(beam, {"right", "top", "left"});
  const InterfaceGeometry geom = interface_geometry(iface, beam, Eigen::VectorXd());
  const SpMat mb = assemble_interface_mass(geom, 42.0, beam.num_dofs());
  CHECK((SpMat(mb.transpose()) - mb).norm() == doctest::Approx(0.0));
  const Eigen::MatrixXd mb_dense(mb);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mb_dense);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-14);

  // Support: rows vanish off the wetted boundary.
  for (int n = 0; n < beam.num_nodes(); ++n) {
    bool wetted = false;
    for (const auto& seg : iface.segments)
      if (seg.nodes[0] == n || seg.nodes[1] == n) wetted = true;
    if (!wetted)
      for (int i = 0; i < 2; ++i) CHECK(Eigen::MatrixXd(mb).row(2 * n + i).norm() == 0.0);
  }
}

TEST_CASE("robin traction pointwise") {
  UnitSegmentFixture fx;
  InterfaceExchange exchange;
  exchange.traction = constant_samples(fx.geom, Vec2(1.0, 2.0));
  exchange.velocity = constant_samples(fx.geom, Vec2(0.3, 0.0));

  // v_s = v_f: the mismatch term drops.
  auto tr = robin_traction(exchange, exchange.velocity, 500.0);
  for (const auto& t : tr) CHECK((t + Vec2(1.0, 2.0)).norm() == doctest::Approx(0.0));

  // Zero fluid traction, constant mismatch c: traction = -gamma c.
  exchange.traction = constant_samples(fx.geom, Vec2::Zero());
  const auto v_s = constant_samples(fx.geom, Vec2(0.5, 0.0));
  tr = robin_traction(exchange, v_s, 100.0);
  for (const auto& t : tr) CHECK((t - Vec2(-100.0 * 0.2, 0.0)).norm() == doctest::Approx(0.0));

  auto short_vs = v_s;
  short_vs.pop_back();
  CHECK_THROWS_AS(robin_traction(exchange, short_vs, 1.0), std::invalid_argument);
}

TEST_CASE("decomposition identity ties the traction to the force split") {
  // For random smooth sampled fields, integrating robin_traction against
  // the shape functions reproduces f_ext1 + f_ext2.
  const QuadMesh beam = build_structured_quad_mesh(3, 7, {0.2, -0.1}, {0.3, 1.4});
  const InterfaceMesh iface = extract_interface(beam, {"right", "top", "left"});
  Eigen::VectorXd d = Eigen::VectorXd::Zero(beam.num_dofs());
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uni(-0.02, 0.02);
  for (int i = 0; i < d.size(); ++i) d[i] = uni(rng);
  const InterfaceGeometry geom = interface_geometry(iface, beam, d);

  InterfaceExchange exchange;
  std::vector<Vec2> v_s;
  for (int s = 0; s < geom.num_samples(); ++s) {
    const Vec2 x = geom.sample_points[s];
    exchange.traction.emplace_back(std::sin(3 * x.x()) + x.y(), std::cos(2 * x.y()));
    exchange.velocity.emplace_back(0.3 * x.y(), x.x() * x.y());
    v_s.emplace_back(std::cos(x.x()), 0.1 + x.y());
  }
  const double gamma = 37.5;

  const auto robin = robin_traction(exchange, v_s, gamma);
  // Independent assembly route: integrate the pointwise Robin traction.
  Eigen::VectorXd assembled = Eigen::VectorXd::Zero(beam.num_dofs());
  const int q = iface.quadrature_order;
  for (int seg = 0; seg < iface.num_segments(); ++seg)
    for (int k = 0; k < q; ++k) {
      const int s = seg * q + k;
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
          assembled[2 * iface.segments[seg].nodes[a] + i] +=
              geom.sample_weights[s] * geom.sample_shape[s][a] * robin[s][i];
    }

  const Eigen::VectorXd split = assemble_f_ext1(geom, exchange, beam.num_dofs()) +
                                assemble_f_ext2(geom, v_s, exchange.velocity, gamma,
                                                beam.num_dofs());
  CHECK((assembled - split).norm() < 1e-12 * split.norm());
}
