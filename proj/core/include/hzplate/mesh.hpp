#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hzplate/tensor.hpp"

namespace hzplate {

/// Reference edge data. Local edges are e12, e13, e23 (indices 0, 1, 2); the local vertex
/// pairs are (0,1), (0,2), (1,2).
struct ReferenceEdge {
  std::array<int, 2> vertices;
  Vec2 tau;  // tangent, from the first to the second local vertex
  Vec2 nu;   // outward, non-normalised normal with |nu| = |tau|
};

/// e12: τ=(0,1), ν=(-1,0); e13: τ=(1,0), ν=(0,-1); e23: τ=(1,-1), ν=(1,1).
const std::array<ReferenceEdge, 3>& reference_edges();

/// Sign σ_e with cof(J)ν = σ_e R_ccw (Jτ) for local edge e.
inline constexpr std::array<double, 3> kEdgeNormalSign = {1.0, -1.0, 1.0};

/// Circle used as exact boundary geometry for curved edges.
struct BoundaryCurve {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;

  [[nodiscard]] double angle(const Vec2& x) const;
  [[nodiscard]] Vec2 point(double angle) const;
};

/// Geometry of an element at a reference point.
struct GeometryPoint {
  Vec2 x;
  Mat2 J;   // columns ∂x/∂ξ, ∂x/∂η
  double det = 0.0;
  Mat2 cof;
  Mat2 Jinv;
  std::array<Mat2, 2> dJ;  // ∂J/∂ξ, ∂J/∂η; zero on straight elements
};

/// Input description of a boundary edge for mesh construction.
struct BoundaryEdgeSpec {
  int marker = 1;
  int curve = -1;  // index into the curve list, -1 for straight
};

/// Conforming triangulation with polytope connectivity and per-element polynomial
/// geometry maps. Immutable after construction.
///
/// Triangles are stored with a local vertex order giving det J > 0 for the map
/// x = x1 λ1 + x2 λ2 + x3 λ3 (λ1 = 1-ξ-η, λ2 = η, λ3 = ξ). Edges are stored as sorted
/// vertex pairs, which fixes their global orientation. Curved boundary edges add
/// Σ_k c_k L_s^k(λ_hi - λ_lo, λ_lo + λ_hi) to the affine map, k = 2..geo_order.
class Mesh {
 public:
  using EdgeKey = std::pair<int, int>;

  Mesh() = default;

  /// Builds a mesh. Triangles may have either orientation; zero-area triangles are
  /// rejected. Boundary edges missing from `boundary` get marker 1 and no curve.
  /// `refinement_edges` holds, per triangle, the vertex pair used by bisection; when empty
  /// the longest edge is used.
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       const std::map<EdgeKey, BoundaryEdgeSpec>& boundary, std::vector<BoundaryCurve> curves, int geo_order,
       std::vector<EdgeKey> refinement_edges = {});

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] int num_elements() const { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] int geo_order() const { return geo_order_; }

  [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
  [[nodiscard]] const Vec2& vertex(int v) const { return vertices_[v]; }
  [[nodiscard]] const std::array<int, 3>& triangle(int e) const { return triangles_[e]; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  [[nodiscard]] const std::array<int, 2>& edge(int i) const { return edges_[i]; }
  /// Global edge index of local edge le of element e.
  [[nodiscard]] int element_edge(int e, int le) const { return elem_edges_[e][le]; }
  /// +1 when the local edge direction matches the global (ascending index) direction.
  [[nodiscard]] int edge_orientation(int e, int le) const { return elem_edge_sign_[e][le]; }
  /// Adjacent elements of an edge; the second entry is -1 on the boundary.
  [[nodiscard]] const std::array<int, 2>& edge_elements(int i) const { return edge_elems_[i]; }
  [[nodiscard]] bool is_boundary_edge(int i) const { return edge_elems_[i][1] < 0; }
  /// Boundary marker (0 for interior edges).
  [[nodiscard]] int edge_marker(int i) const { return edge_marker_[i]; }
  [[nodiscard]] int edge_curve(int i) const { return edge_curve_[i]; }
  [[nodiscard]] bool is_boundary_vertex(int v) const { return vertex_boundary_[v]; }
  [[nodiscard]] const std::vector<BoundaryCurve>& curves() const { return curves_; }
  /// Coefficients c_k (k = 2..geo_order) of a curved edge; empty for straight edges.
  [[nodiscard]] const std::vector<Vec2>& edge_coefficients(int i) const { return edge_coeffs_[i]; }
  [[nodiscard]] bool is_curved(int e) const { return elem_curved_[e]; }
  [[nodiscard]] const EdgeKey& refinement_edge(int e) const { return ref_edges_[e]; }
  [[nodiscard]] std::optional<int> find_edge(int a, int b) const;

  /// Physical point, Jacobian, determinant, cofactor and map Hessian. Throws
  /// std::domain_error for a non-positive Jacobian determinant.
  [[nodiscard]] GeometryPoint geometry(int e, const Vec2& xi) const;

  /// Maximum edge length (chord length for curved edges).
  [[nodiscard]] double max_edge_length() const;
  /// Area by quadrature of the geometry map.
  [[nodiscard]] double area() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::map<EdgeKey, int> edge_index_;
  std::vector<std::array<int, 3>> elem_edges_;
  std::vector<std::array<int, 3>> elem_edge_sign_;
  std::vector<std::array<int, 2>> edge_elems_;
  std::vector<int> edge_marker_;
  std::vector<int> edge_curve_;
  std::vector<std::vector<Vec2>> edge_coeffs_;
  std::vector<char> vertex_boundary_;
  std::vector<char> elem_curved_;
  std::vector<BoundaryCurve> curves_;
  std::vector<EdgeKey> ref_edges_;
  int geo_order_ = 1;
};

/// Regular triangulation of [0,1]^2 with 2^k triangles; k must be odd (n = 2^((k-1)/2)
/// cells per side, each split along a diagonal). Boundary markers: 1 bottom, 2 right,
/// 3 top, 4 left.
Mesh square_mesh(int k);

/// Unit-disk triangulation with n_elems = 6 m^2 triangles (m rings). Boundary edges are
/// curved with polynomial order geo_order ∈ {1, 3}; order 1 uses chords.
Mesh disk_mesh(int n_elems, int geo_order);

/// L-shape [-1,1]^2 minus (0,1]^2: three unit squares split into six triangles. The eight
/// boundary segments carry markers 1..8, counter-clockwise from (-1,-1).
Mesh lshape_mesh();

/// Red refinement of every element (each triangle into four).
Mesh refine_uniform(const Mesh& mesh);

/// Newest-vertex bisection of the marked elements (three bisections each) with
/// conforming closure. Throws std::invalid_argument for an empty or out-of-range set.
Mesh refine(const Mesh& mesh, const std::vector<int>& marked);

}  // namespace hzplate
