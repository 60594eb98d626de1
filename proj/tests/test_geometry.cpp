#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsilab/errors.hpp"
#include "fsilab/geometry.hpp"

using namespace fsilab;

TEST_CASE("unit square mesh") {
  const QuadMesh mesh = build_structured_quad_mesh(1, 1, {0, 0}, {1, 1});
  CHECK(mesh.num_elements() == 1);
  CHECK(mesh.num_nodes() == 4);
  CHECK(mesh_area(mesh, gauss_rule(2, ElementKind::Quad)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("thick-beam solid mesh dimensions") {
  const QuadMesh mesh = build_structured_quad_mesh(10, 30, {0, 0}, {0.0853, 0.3});
  CHECK(mesh.num_elements() == 300);
  CHECK(mesh.num_nodes() == 11 * 31);
  const double area = mesh_area(mesh, gauss_rule(2, ElementKind::Quad));
  CHECK(area == doctest::Approx(0.0853 * 0.3).epsilon(1e-12));
}

TEST_CASE("uniform partition element areas") {
  const QuadMesh mesh = build_structured_quad_mesh(3, 2, {0.5, -1.0}, {1.2, 0.8});
  const QuadratureRule rule = gauss_rule(1, ElementKind::Quad);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    QuadMesh single;
    single.nodes = mesh.nodes;
    single.elements = {mesh.elements[e]};
    CHECK(mesh_area(single, rule) == doctest::Approx(1.2 * 0.8 / 6.0).epsilon(1e-13));
  }
}

TEST_CASE("mesh construction rejects bad arguments") {
  CHECK_THROWS_AS(build_structured_quad_mesh(0, 1, {0, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_quad_mesh(1, 1, {0, 0}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_quad_mesh(1, -2, {0, 0}, {1, 1}), std::invalid_argument);
}

TEST_CASE("gauss rules") {
  const QuadratureRule q1 = gauss_rule(1, ElementKind::Quad);
  CHECK(q1.points.size() == 1);
  CHECK(q1.weights[0] == doctest::Approx(4.0));

  const QuadratureRule q2 = gauss_rule(2, ElementKind::Quad);
  CHECK(q2.points.size() == 4);
  double sum = 0.0;
  for (double w : q2.weights) sum += w;
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-15));

  // Oracle: analytic integral of x^2 over [-1, 1] is 2/3.
  const QuadratureRule s2 = gauss_rule(2, ElementKind::Segment);
  double integral = 0.0;
  for (std::size_t i = 0; i < s2.points.size(); ++i)
    integral += s2.weights[i] * s2.points[i].x() * s2.points[i].x();
  CHECK(integral == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(gauss_rule(4, ElementKind::Quad), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule(0, ElementKind::Segment), std::invalid_argument);

  // Exactness over a stretched mesh: degree (2*order-1) polynomials per
  // direction integrate exactly, so the area of any structured mesh does.
  const QuadMesh mesh = build_structured_quad_mesh(7, 3, {-2, 1}, {3.7, 0.9});
  for (int order = 1; order <= 3; ++order)
    CHECK(mesh_area(mesh, gauss_rule(order, ElementKind::Quad)) ==
          doctest::Approx(3.7 * 0.9).epsilon(1e-12));
}

TEST_CASE("interface extraction on the wetted sides of a beam") {
  const QuadMesh mesh = build_structured_quad_mesh(10, 30, {0, 0}, {0.0853, 0.3});
  const InterfaceMesh iface = extract_interface(mesh, {"right", "top", "left"});
  CHECK(iface.num_segments() == 2 * 30 + 10);

  // Contiguity: each segment starts where the previous one ended.
  for (int s = 1; s < iface.num_segments(); ++s)
    CHECK(iface.segments[s].nodes[0] == iface.segments[s - 1].nodes[1]);

  // Total length equals the selected perimeter.
  double length = 0.0;
  for (const auto& seg : iface.segments)
    length += (seg.ref_endpoints[1] - seg.ref_endpoints[0]).norm();
  CHECK(length == doctest::Approx(2 * 0.3 + 0.0853).epsilon(1e-13));

  // Normals are unit and point outward from the rectangle.
  for (const auto& seg : iface.segments) {
    CHECK(seg.ref_normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const Vec2 mid = 0.5 * (seg.ref_endpoints[0] + seg.ref_endpoints[1]);
    Vec2 expected;
    if (std::abs(mid.x()) < 1e-12)
      expected = -Vec2::UnitX();
    else if (std::abs(mid.x() - 0.0853) < 1e-12)
      expected = Vec2::UnitX();
    else
      expected = Vec2::UnitY();
    CHECK((seg.ref_normal - expected).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("closed-loop interface around the unit square") {
  const QuadMesh mesh = build_structured_quad_mesh(4, 4, {0, 0}, {1, 1});
  const InterfaceMesh iface = extract_interface(mesh, {"bottom", "right", "top", "left"});
  CHECK(iface.num_segments() == 16);
  for (int s = 0; s < iface.num_segments(); ++s)
    CHECK(iface.segments[s].nodes[0] ==
          iface.segments[(s + iface.num_segments() - 1) % iface.num_segments()].nodes[1]);
  double length = 0.0;
  for (const auto& seg : iface.segments)
    length += (seg.ref_endpoints[1] - seg.ref_endpoints[0]).norm();
  CHECK(length == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("interface extraction error paths") {
  const QuadMesh mesh = build_structured_quad_mesh(2, 2, {0, 0}, {1, 1});
  CHECK_THROWS_AS(extract_interface(mesh, std::vector<std::string>{}), std::invalid_argument);
  CHECK_THROWS_AS(extract_interface(mesh, {"north"}), std::invalid_argument);
  CHECK_THROWS_AS(
      extract_interface(mesh, [](const Vec2&) { return false; }), std::invalid_argument);

  // Hand-crafted non-chain topology: one node feeding two selected edges.
  QuadMesh broken = mesh;
  auto edges = broken.boundary_tags.at("bottom");
  BoundaryEdge duplicate = edges[0];
  duplicate.n1 = edges[1].n1;  // second edge out of the same start node
  broken.boundary_tags["broken"] = {edges[0], duplicate};
  CHECK_THROWS_AS(extract_interface(broken, {"broken"}), TopologyError);
}

TEST_CASE("predicate selector matches side selector") {
  const QuadMesh mesh = build_structured_quad_mesh(5, 7, {0, 0}, {0.5, 0.7});
  const InterfaceMesh by_name = extract_interface(mesh, {"left"});
  const InterfaceMesh by_pred =
      extract_interface(mesh, [](const Vec2& mid) { return mid.x() < 1e-12; });
  REQUIRE(by_name.num_segments() == by_pred.num_segments());
  for (int s = 0; s < by_name.num_segments(); ++s) {
    CHECK(by_name.segments[s].nodes[0] == by_pred.segments[s].nodes[0]);
    CHECK(by_name.segments[s].nodes[1] == by_pred.segments[s].nodes[1]);
  }
}

TEST_CASE("deformed interface geometry") {
  const QuadMesh mesh = build_structured_quad_mesh(1, 2, {0, 0}, {1, 2});
  const InterfaceMesh iface = extract_interface(mesh, {"right"});
  REQUIRE(iface.num_segments() == 2);

  // Reference geometry when the displacement vector is empty.
  const InterfaceGeometry ref = interface_geometry(iface, mesh, Eigen::VectorXd());
  CHECK(ref.lengths[0] == doctest::Approx(1.0));
  CHECK(ref.normals[0].x() == doctest::Approx(1.0));
  double total_w = 0.0;
  for (double w : ref.sample_weights) total_w += w;
  CHECK(total_w == doctest::Approx(2.0).epsilon(1e-14));

  // Stretch the right edge: lengths and sample positions follow.
  Eigen::VectorXd d = Eigen::VectorXd::Zero(mesh.num_dofs());
  for (const auto& seg : iface.segments)
    for (int a = 0; a < 2; ++a) d[2 * seg.nodes[a]] = 0.25;  // shift +x
  const InterfaceGeometry cur = interface_geometry(iface, mesh, d);
  CHECK(cur.endpoints[0][0].x() == doctest::Approx(1.25));
  CHECK(cur.lengths[0] == doctest::Approx(1.0));

  // Field sampling is linear interpolation of nodal values.
  Eigen::VectorXd field = Eigen::VectorXd::Zero(mesh.num_dofs());
  for (int n = 0; n < mesh.num_nodes(); ++n) field[2 * n + 1] = mesh.nodes[n].y();
  const auto samples = sample_interface_field(cur, field);
  for (int s = 0; s < cur.num_samples(); ++s)
    CHECK(samples[s].y() == doctest::Approx(ref.sample_points[s].y()).epsilon(1e-12));
}
