#include "fsilab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "fsilab/errors.hpp"

namespace fsilab {

QuadMesh build_structured_quad_mesh(int nx, int ny, const Vec2& origin, const Vec2& extent) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_structured_quad_mesh: element counts must be >= 1");
  if (!(extent.x() > 0.0) || !(extent.y() > 0.0))
    throw std::invalid_argument("build_structured_quad_mesh: extents must be positive");

  QuadMesh mesh;
  const double hx = extent.x() / nx;
  const double hy = extent.y() / ny;
  mesh.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.emplace_back(origin.x() + i * hx, origin.y() + j * hy);

  auto nid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.elements.reserve(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.elements.push_back({nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)});

  auto eid = [nx](int i, int j) { return j * nx + i; };
  auto& bottom = mesh.boundary_tags["bottom"];
  for (int i = 0; i < nx; ++i) bottom.push_back({eid(i, 0), 0, nid(i, 0), nid(i + 1, 0)});
  auto& right = mesh.boundary_tags["right"];
  for (int j = 0; j < ny; ++j) right.push_back({eid(nx - 1, j), 1, nid(nx, j), nid(nx, j + 1)});
  auto& top = mesh.boundary_tags["top"];
  for (int i = nx - 1; i >= 0; --i) top.push_back({eid(i, ny - 1), 2, nid(i + 1, ny), nid(i, ny)});
  auto& left = mesh.boundary_tags["left"];
  for (int j = ny - 1; j >= 0; --j) left.push_back({eid(0, j), 3, nid(0, j + 1), nid(0, j)});

  return mesh;
}

QuadratureRule gauss_rule(int order, ElementKind kind) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("gauss_rule: supported orders are 1, 2, 3");

  std::vector<double> xi, w;
  switch (order) {
    case 1:
      xi = {0.0};
      w = {2.0};
      break;
    case 2:
      xi = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
      w = {1.0, 1.0};
      break;
    default:
      xi = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
  }

  QuadratureRule rule;
  rule.kind = kind;
  if (kind == ElementKind::Segment) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      rule.points.emplace_back(xi[i], 0.0);
      rule.weights.push_back(w[i]);
    }
  } else {
    for (std::size_t j = 0; j < xi.size(); ++j)
      for (std::size_t i = 0; i < xi.size(); ++i) {
        rule.points.emplace_back(xi[i], xi[j]);
        rule.weights.push_back(w[i] * w[j]);
      }
  }
  return rule;
}

namespace {

InterfaceMesh chain_edges(const QuadMesh& mesh, std::vector<BoundaryEdge> pool,
                          int quadrature_order) {
  if (pool.empty())
    throw std::invalid_argument("extract_interface: selection is empty");

  // Each selected edge points ccw, so contiguous chains follow out-edges.
  std::unordered_map<int, int> out_edge;  // start node -> pool index
  std::unordered_map<int, int> in_count;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (!out_edge.emplace(pool[k].n0, static_cast<int>(k)).second)
      throw TopologyError("extract_interface: node " + std::to_string(pool[k].n0) +
                          " starts more than one selected edge");
    if (++in_count[pool[k].n1] > 1)
      throw TopologyError("extract_interface: node " + std::to_string(pool[k].n1) +
                          " ends more than one selected edge");
  }

  // Chain heads: start nodes that are not the end of any selected edge.
  std::vector<int> heads;
  for (const auto& e : pool)
    if (in_count.find(e.n0) == in_count.end()) heads.push_back(e.n0);
  std::sort(heads.begin(), heads.end());

  std::vector<char> used(pool.size(), 0);
  std::vector<BoundaryEdge> ordered;
  ordered.reserve(pool.size());
  auto walk = [&](int start) {
    int node = start;
    while (true) {
      auto it = out_edge.find(node);
      if (it == out_edge.end() || used[it->second]) break;
      used[it->second] = 1;
      ordered.push_back(pool[it->second]);
      node = pool[it->second].n1;
      if (node == start) break;  // closed loop
    }
  };
  for (int h : heads) walk(h);
  // Remaining edges belong to closed loops; start each at its smallest node.
  while (ordered.size() < pool.size()) {
    int best = -1;
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (!used[k] && (best < 0 || pool[k].n0 < pool[best].n0)) best = static_cast<int>(k);
    walk(pool[best].n0);
  }

  InterfaceMesh iface;
  iface.quadrature_order = quadrature_order;
  iface.segments.reserve(ordered.size());
  for (const auto& e : ordered) {
    InterfaceSegment seg;
    seg.edge = e;
    seg.nodes = {e.n0, e.n1};
    seg.ref_endpoints = {mesh.nodes[e.n0], mesh.nodes[e.n1]};
    const Vec2 t = seg.ref_endpoints[1] - seg.ref_endpoints[0];
    const double len = t.norm();
    if (!(len > 0.0)) throw TopologyError("extract_interface: degenerate edge");
    seg.ref_normal = Vec2(t.y(), -t.x()) / len;
    iface.segments.push_back(seg);
  }
  return iface;
}

}  // namespace

InterfaceMesh extract_interface(const QuadMesh& mesh, const std::vector<std::string>& sides,
                                int quadrature_order) {
  std::vector<BoundaryEdge> pool;
  for (const auto& side : sides) {
    auto it = mesh.boundary_tags.find(side);
    if (it == mesh.boundary_tags.end())
      throw std::invalid_argument("extract_interface: unknown boundary tag '" + side + "'");
    pool.insert(pool.end(), it->second.begin(), it->second.end());
  }
  return chain_edges(mesh, std::move(pool), quadrature_order);
}

InterfaceMesh extract_interface(const QuadMesh& mesh,
                                const std::function<bool(const Vec2&)>& selector,
                                int quadrature_order) {
  std::vector<BoundaryEdge> pool;
  for (const auto& [name, edges] : mesh.boundary_tags) {
    (void)name;
    for (const auto& e : edges) {
      const Vec2 mid = 0.5 * (mesh.nodes[e.n0] + mesh.nodes[e.n1]);
      if (selector(mid)) pool.push_back(e);
    }
  }
  return chain_edges(mesh, std::move(pool), quadrature_order);
}

InterfaceGeometry interface_geometry(const InterfaceMesh& iface, const QuadMesh& solid_mesh,
                                     const Eigen::VectorXd& displacement) {
  const bool deformed = displacement.size() > 0;
  if (deformed && displacement.size() != solid_mesh.num_dofs())
    throw std::invalid_argument("interface_geometry: displacement size mismatch");

  const QuadratureRule rule = gauss_rule(iface.quadrature_order, ElementKind::Segment);

  InterfaceGeometry geom;
  geom.mesh = &iface;
  geom.endpoints.reserve(iface.segments.size());
  geom.normals.reserve(iface.segments.size());
  geom.lengths.reserve(iface.segments.size());
  for (const auto& seg : iface.segments) {
    std::array<Vec2, 2> p = seg.ref_endpoints;
    if (deformed)
      for (int a = 0; a < 2; ++a)
        p[a] += Vec2(displacement[2 * seg.nodes[a]], displacement[2 * seg.nodes[a] + 1]);
    const Vec2 t = p[1] - p[0];
    const double len = t.norm();
    geom.endpoints.push_back(p);
    geom.lengths.push_back(len);
    geom.normals.emplace_back(Vec2(t.y(), -t.x()) / len);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double xi = rule.points[q].x();
      const double n0 = 0.5 * (1.0 - xi);
      const double n1 = 0.5 * (1.0 + xi);
      geom.sample_points.push_back(n0 * p[0] + n1 * p[1]);
      geom.sample_weights.push_back(rule.weights[q] * 0.5 * len);
      geom.sample_shape.push_back({n0, n1});
    }
  }
  return geom;
}

std::vector<Vec2> sample_interface_field(const InterfaceGeometry& geom,
                                         const Eigen::VectorXd& nodal_field) {
  const InterfaceMesh& iface = *geom.mesh;
  std::vector<Vec2> out;
  out.reserve(geom.num_samples());
  const int q = iface.quadrature_order;
  for (int s = 0; s < iface.num_segments(); ++s) {
    const auto& seg = iface.segments[s];
    for (int k = 0; k < q; ++k) {
      const auto& N = geom.sample_shape[s * q + k];
      Vec2 val = Vec2::Zero();
      for (int a = 0; a < 2; ++a)
        val += N[a] * Vec2(nodal_field[2 * seg.nodes[a]], nodal_field[2 * seg.nodes[a] + 1]);
      out.push_back(val);
    }
  }
  return out;
}

double mesh_area(const QuadMesh& mesh, const QuadratureRule& rule) {
  double area = 0.0;
  for (const auto& elem : mesh.elements) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double xi = rule.points[q].x();
      const double eta = rule.points[q].y();
      const double dN[4][2] = {{-0.25 * (1 - eta), -0.25 * (1 - xi)},
                               {0.25 * (1 - eta), -0.25 * (1 + xi)},
                               {0.25 * (1 + eta), 0.25 * (1 + xi)},
                               {-0.25 * (1 + eta), 0.25 * (1 - xi)}};
      Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
      for (int a = 0; a < 4; ++a) {
        const Vec2& x = mesh.nodes[elem[a]];
        J(0, 0) += dN[a][0] * x.x();
        J(0, 1) += dN[a][1] * x.x();
        J(1, 0) += dN[a][0] * x.y();
        J(1, 1) += dN[a][1] * x.y();
      }
      area += rule.weights[q] * J.determinant();
    }
  }
  return area;
}

}  // namespace fsilab
