#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fsilab {

using Vec2 = Eigen::Vector2d;

// Boundary edge of a quad element, stored in the element's counterclockwise
// orientation (interior on the left of n0->n1).
struct BoundaryEdge {
  int element = -1;
  int local_edge = -1;  // 0 bottom, 1 right, 2 top, 3 left of the reference quad
  int n0 = -1;
  int n1 = -1;
};

// Structured quadrilateral mesh with 4-node counterclockwise elements and
// named boundary edge lists ordered along the counterclockwise loop.
struct QuadMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> elements;
  std::map<std::string, std::vector<BoundaryEdge>> boundary_tags;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_dofs() const { return 2 * num_nodes(); }
};

enum class ElementKind { Quad, Segment };

// Tensor-product Gauss rule on the bi-unit reference element. For
// segments the second point coordinate is unused (zero).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  ElementKind kind = ElementKind::Quad;
};

// Ordered wetted-boundary segment: one solid boundary edge plus its
// reference geometry and outward solid normal.
struct InterfaceSegment {
  std::array<int, 2> nodes{};              // edge nodes, counterclockwise order
  std::array<Vec2, 2> ref_endpoints{};
  BoundaryEdge edge;
  Vec2 ref_normal = Vec2::Zero();          // unit, points out of the solid
};

struct InterfaceMesh {
  std::vector<InterfaceSegment> segments;
  int quadrature_order = 2;

  int num_segments() const { return static_cast<int>(segments.size()); }
  int num_samples() const { return num_segments() * quadrature_order; }
};

// Current-configuration view of an interface: endpoints mapped by a solid
// displacement field, refreshed normals/lengths, and the flattened
// quadrature sample layout shared by all interface integrals.
struct InterfaceGeometry {
  const InterfaceMesh* mesh = nullptr;
  std::vector<std::array<Vec2, 2>> endpoints;
  std::vector<Vec2> normals;      // unit, out of the solid
  std::vector<double> lengths;
  // Flattened samples, segment-major; weights include the segment jacobian.
  std::vector<Vec2> sample_points;
  std::vector<double> sample_weights;
  std::vector<std::array<double, 2>> sample_shape;  // linear trace N0,N1

  int num_samples() const { return static_cast<int>(sample_points.size()); }
};

QuadMesh build_structured_quad_mesh(int nx, int ny, const Vec2& origin, const Vec2& extent);

QuadratureRule gauss_rule(int order, ElementKind kind);

// Collects the selected boundary edges into contiguous chains ordered along
// the counterclockwise boundary loop. Selector variants: named sides or a
// predicate on the edge midpoint (reference configuration).
InterfaceMesh extract_interface(const QuadMesh& mesh, const std::vector<std::string>& sides,
                                int quadrature_order = 2);
InterfaceMesh extract_interface(const QuadMesh& mesh,
                                const std::function<bool(const Vec2&)>& selector,
                                int quadrature_order = 2);

// Maps the interface into the current configuration given nodal solid
// displacements (pass an empty vector for the reference configuration).
InterfaceGeometry interface_geometry(const InterfaceMesh& iface, const QuadMesh& solid_mesh,
                                     const Eigen::VectorXd& displacement);

// Samples a nodal 2-vector field (size 2*num_nodes) at the interface
// quadrature points.
std::vector<Vec2> sample_interface_field(const InterfaceGeometry& geom,
                                         const Eigen::VectorXd& nodal_field);

double mesh_area(const QuadMesh& mesh, const QuadratureRule& rule);

}  // namespace fsilab
