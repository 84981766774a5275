#include "hzplate/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "hzplate/jet.hpp"
#include "hzplate/polynomials.hpp"
#include "hzplate/quadrature.hpp"

namespace hzplate {

const std::array<ReferenceEdge, 3>& reference_edges() {
  static const std::array<ReferenceEdge, 3> edges = {
      ReferenceEdge{{0, 1}, Vec2(0.0, 1.0), Vec2(-1.0, 0.0)},
      ReferenceEdge{{0, 2}, Vec2(1.0, 0.0), Vec2(0.0, -1.0)},
      ReferenceEdge{{1, 2}, Vec2(1.0, -1.0), Vec2(1.0, 1.0)},
  };
  return edges;
}

double BoundaryCurve::angle(const Vec2& x) const { return std::atan2(x[1] - center[1], x[0] - center[0]); }

Vec2 BoundaryCurve::point(double a) const { return center + radius * Vec2(std::cos(a), std::sin(a)); }

namespace {

constexpr int kMaxGeoOrder = 8;

double wrap_angle(double d) {
  while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d;
}

Mesh::EdgeKey key(int a, int b) { return a < b ? Mesh::EdgeKey{a, b} : Mesh::EdgeKey{b, a}; }

double affine_det(const Vec2& x1, const Vec2& x2, const Vec2& x3) {
  const Vec2 c0 = x3 - x1;
  const Vec2 c1 = x2 - x1;
  return c0[0] * c1[1] - c0[1] * c1[0];
}

/// Point on the arc between the endpoints of a curved edge at parameter s ∈ [-1, 1].
Vec2 arc_point(const BoundaryCurve& c, const Vec2& lo, const Vec2& hi, double s) {
  const double a0 = c.angle(lo);
  const double da = wrap_angle(c.angle(hi) - a0);
  return c.point(a0 + 0.5 * (1.0 + s) * da);
}

std::vector<Vec2> fit_edge_coefficients(const BoundaryCurve& c, const Vec2& lo, const Vec2& hi, int q) {
  const int n = q - 1;
  Eigen::MatrixXd a(n, n);
  Eigen::MatrixXd rhs(n, 2);
  std::vector<double> ls;
  for (int m = 1; m <= n; ++m) {
    const double s = -1.0 + 2.0 * m / q;
    scaled_integrated_legendre_all(q, s, 1.0, ls);
    for (int k = 2; k <= q; ++k) a(m - 1, k - 2) = ls[k];
    const Vec2 d = arc_point(c, lo, hi, s) - (0.5 * (1.0 - s) * lo + 0.5 * (1.0 + s) * hi);
    rhs.row(m - 1) = d.transpose();
  }
  const Eigen::MatrixXd sol = a.fullPivLu().solve(rhs);
  std::vector<Vec2> coeffs(n);
  for (int k = 0; k < n; ++k) coeffs[k] = sol.row(k).transpose();
  return coeffs;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           const std::map<EdgeKey, BoundaryEdgeSpec>& boundary, std::vector<BoundaryCurve> curves, int geo_order,
           std::vector<EdgeKey> refinement_edges)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), curves_(std::move(curves)), geo_order_(geo_order) {
  if (geo_order_ < 1 || geo_order_ > kMaxGeoOrder)
    throw std::invalid_argument("Mesh: geometry order must lie in [1, " + std::to_string(kMaxGeoOrder) + "]");
  if (triangles_.empty()) throw std::invalid_argument("Mesh: no triangles");
  if (!refinement_edges.empty() && refinement_edges.size() != triangles_.size())
    throw std::invalid_argument("Mesh: refinement edge list does not match the triangle count");
  const int nv = num_vertices();

  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    auto& t = triangles_[e];
    for (int v : t)
      if (v < 0 || v >= nv) throw std::invalid_argument("Mesh: triangle " + std::to_string(e) + " references a missing vertex");
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
      throw std::invalid_argument("Mesh: triangle " + std::to_string(e) + " repeats a vertex");
    const double det = affine_det(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    const double scale = (vertices_[t[1]] - vertices_[t[0]]).squaredNorm() + (vertices_[t[2]] - vertices_[t[0]]).squaredNorm();
    if (!(std::abs(det) > 1e-14 * scale)) throw std::invalid_argument("Mesh: triangle " + std::to_string(e) + " has zero area");
    if (det < 0.0) std::swap(t[1], t[2]);
  }

  const auto& ref = reference_edges();
  elem_edges_.resize(triangles_.size());
  elem_edge_sign_.resize(triangles_.size());
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    for (int le = 0; le < 3; ++le) {
      const int a = triangles_[e][ref[le].vertices[0]];
      const int b = triangles_[e][ref[le].vertices[1]];
      const EdgeKey k = key(a, b);
      auto [it, inserted] = edge_index_.emplace(k, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({k.first, k.second});
        edge_elems_.push_back({static_cast<int>(e), -1});
      } else {
        auto& adj = edge_elems_[it->second];
        if (adj[1] >= 0) throw std::invalid_argument("Mesh: edge shared by more than two triangles");
        adj[1] = static_cast<int>(e);
      }
      elem_edges_[e][le] = it->second;
      elem_edge_sign_[e][le] = a < b ? 1 : -1;
    }
  }

  const int ne = num_edges();
  edge_marker_.assign(ne, 0);
  edge_curve_.assign(ne, -1);
  edge_coeffs_.assign(ne, {});
  vertex_boundary_.assign(nv, 0);
  for (int i = 0; i < ne; ++i) {
    if (!is_boundary_edge(i)) continue;
    vertex_boundary_[edges_[i][0]] = 1;
    vertex_boundary_[edges_[i][1]] = 1;
    edge_marker_[i] = 1;
    auto it = boundary.find({edges_[i][0], edges_[i][1]});
    if (it == boundary.end()) continue;
    edge_marker_[i] = it->second.marker;
    if (it->second.curve >= 0) {
      if (it->second.curve >= static_cast<int>(curves_.size())) throw std::invalid_argument("Mesh: boundary edge references a missing curve");
      edge_curve_[i] = it->second.curve;
    }
  }
  for (const auto& [k, spec] : boundary) {
    auto it = edge_index_.find(key(k.first, k.second));
    if (it == edge_index_.end()) throw std::invalid_argument("Mesh: boundary entry names a missing edge");
    if (!is_boundary_edge(it->second)) throw std::invalid_argument("Mesh: boundary entry names an interior edge");
  }

  elem_curved_.assign(triangles_.size(), 0);
  if (geo_order_ >= 2) {
    for (int i = 0; i < ne; ++i) {
      if (edge_curve_[i] < 0) continue;
      edge_coeffs_[i] = fit_edge_coefficients(curves_[edge_curve_[i]], vertices_[edges_[i][0]], vertices_[edges_[i][1]], geo_order_);
      elem_curved_[edge_elems_[i][0]] = 1;
    }
  }

  ref_edges_.resize(triangles_.size());
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    if (!refinement_edges.empty()) {
      const EdgeKey k = key(refinement_edges[e].first, refinement_edges[e].second);
      const auto& t = triangles_[e];
      const bool ok = std::count(t.begin(), t.end(), k.first) == 1 && std::count(t.begin(), t.end(), k.second) == 1;
      if (!ok) throw std::invalid_argument("Mesh: refinement edge is not an edge of its triangle");
      ref_edges_[e] = k;
      continue;
    }
    int best = 0;
    double best_len = -1.0;
    for (int le = 0; le < 3; ++le) {
      const auto& ed = edges_[elem_edges_[e][le]];
      const double len = (vertices_[ed[0]] - vertices_[ed[1]]).norm();
      if (len > best_len * (1.0 + 1e-12)) {
        best_len = len;
        best = le;
      }
    }
    const auto& ed = edges_[elem_edges_[e][best]];
    ref_edges_[e] = {ed[0], ed[1]};
  }

  // Audit curved Jacobians on a rule finer than any assembly rule.
  for (int e = 0; e < num_elements(); ++e) {
    if (!elem_curved_[e]) continue;
    for (const auto& xi : triangle_quadrature(2 * geo_order_ + 8).points) (void)geometry(e, xi);
  }
}

std::optional<int> Mesh::find_edge(int a, int b) const {
  auto it = edge_index_.find(key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

GeometryPoint Mesh::geometry(int e, const Vec2& xi) const {
  const auto& t = triangles_[e];
  GeometryPoint g;
  if (!elem_curved_[e]) {
    const Vec2& x1 = vertices_[t[0]];
    const Vec2& x2 = vertices_[t[1]];
    const Vec2& x3 = vertices_[t[2]];
    g.J.col(0) = x3 - x1;
    g.J.col(1) = x2 - x1;
    g.x = x1 + xi[0] * (x3 - x1) + xi[1] * (x2 - x1);
    g.dJ = {Mat2::Zero(), Mat2::Zero()};
  } else {
    const auto lam = barycentric(Jet::variable(xi[0], 0), Jet::variable(xi[1], 1));
    std::array<Jet, 2> x;
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 3; ++i) x[c] += vertices_[t[i]][c] * lam[i];
    const auto& ref = reference_edges();
    std::vector<Jet> ls;
    for (int le = 0; le < 3; ++le) {
      const auto& coeffs = edge_coeffs_[elem_edges_[e][le]];
      if (coeffs.empty()) continue;
      int lo = ref[le].vertices[0];
      int hi = ref[le].vertices[1];
      if (elem_edge_sign_[e][le] < 0) std::swap(lo, hi);
      scaled_integrated_legendre_all(geo_order_, lam[hi] - lam[lo], lam[lo] + lam[hi], ls);
      for (int k = 2; k <= geo_order_; ++k)
        for (int c = 0; c < 2; ++c) x[c] += coeffs[k - 2][c] * ls[k];
    }
    for (int c = 0; c < 2; ++c) {
      g.x[c] = x[c].v;
      g.J(c, 0) = x[c].d[0];
      g.J(c, 1) = x[c].d[1];
      g.dJ[0](c, 0) = x[c].h[0];
      g.dJ[0](c, 1) = x[c].h[1];
      g.dJ[1](c, 0) = x[c].h[1];
      g.dJ[1](c, 1) = x[c].h[2];
    }
  }
  g.det = g.J.determinant();
  if (!(g.det > 0.0)) throw std::domain_error("Mesh: non-positive Jacobian determinant in element " + std::to_string(e));
  g.cof = cofactor(g.J);
  g.Jinv = g.cof.transpose() / g.det;
  return g;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& ed : edges_) h = std::max(h, (vertices_[ed[0]] - vertices_[ed[1]]).norm());
  return h;
}

double Mesh::area() const {
  const auto& rule = triangle_quadrature(2 * geo_order_);
  double a = 0.0;
  for (int e = 0; e < num_elements(); ++e)
    for (std::size_t q = 0; q < rule.size(); ++q) a += rule.weights[q] * geometry(e, rule.points[q]).det;
  return a;
}

// ---------------------------------------------------------------------------------------
// Generators

Mesh square_mesh(int k) {
  if (k < 1 || k > 25) throw std::invalid_argument("square_mesh: k must lie in [1, 25]");
  if (k % 2 == 0) throw std::invalid_argument("square_mesh: 2^k triangles need odd k for an integer grid");
  const int n = 1 << ((k - 1) / 2);
  std::vector<Vec2> verts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(double(i) / n, double(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  std::map<Mesh::EdgeKey, BoundaryEdgeSpec> bnd;
  for (int i = 0; i < n; ++i) {
    bnd[key(id(i, 0), id(i + 1, 0))] = {1, -1};
    bnd[key(id(n, i), id(n, i + 1))] = {2, -1};
    bnd[key(id(i, n), id(i + 1, n))] = {3, -1};
    bnd[key(id(0, i), id(0, i + 1))] = {4, -1};
  }
  return Mesh(std::move(verts), std::move(tris), bnd, {}, 1);
}

Mesh disk_mesh(int n_elems, int geo_order) {
  if (geo_order != 1 && geo_order != 3) throw std::invalid_argument("disk_mesh: geometry order must be 1 or 3");
  const int m = static_cast<int>(std::lround(std::sqrt(n_elems / 6.0)));
  if (n_elems < 6 || 6 * m * m != n_elems) throw std::invalid_argument("disk_mesh: element count must be 6 m^2 (6, 24, 54, ...)");
  std::vector<Vec2> verts{Vec2(0.0, 0.0)};
  std::vector<int> ring_start{0};
  for (int i = 1; i <= m; ++i) {
    ring_start.push_back(static_cast<int>(verts.size()));
    const double r = double(i) / m;
    for (int j = 0; j < 6 * i; ++j) {
      const double a = 2.0 * std::numbers::pi * j / (6.0 * i);
      verts.emplace_back(r * std::cos(a), r * std::sin(a));
    }
  }
  auto ring = [&](int i, int j) {
    if (i == 0) return 0;
    return ring_start[i] + ((j % (6 * i)) + 6 * i) % (6 * i);
  };
  std::vector<std::array<int, 3>> tris;
  for (int i = 1; i <= m; ++i)
    for (int s = 0; s < 6; ++s) {
      for (int j = 0; j < i; ++j) tris.push_back({ring(i, s * i + j), ring(i, s * i + j + 1), ring(i - 1, s * (i - 1) + j)});
      for (int j = 0; j + 1 < i; ++j)
        tris.push_back({ring(i - 1, s * (i - 1) + j), ring(i, s * i + j + 1), ring(i - 1, s * (i - 1) + j + 1)});
    }
  std::map<Mesh::EdgeKey, BoundaryEdgeSpec> bnd;
  for (int j = 0; j < 6 * m; ++j) bnd[key(ring(m, j), ring(m, j + 1))] = {1, 0};
  return Mesh(std::move(verts), std::move(tris), bnd, {BoundaryCurve{}}, geo_order);
}

Mesh lshape_mesh() {
  std::vector<Vec2> verts = {Vec2(-1, -1), Vec2(0, -1), Vec2(1, -1), Vec2(1, 0),
                             Vec2(0, 0),   Vec2(0, 1),  Vec2(-1, 1), Vec2(-1, 0)};
  std::vector<std::array<int, 3>> tris = {{0, 1, 4}, {0, 4, 7}, {1, 2, 4}, {2, 3, 4}, {7, 4, 6}, {4, 5, 6}};
  std::map<Mesh::EdgeKey, BoundaryEdgeSpec> bnd;
  for (int i = 0; i < 8; ++i) bnd[key(i, (i + 1) % 8)] = {i + 1, -1};
  return Mesh(std::move(verts), std::move(tris), bnd, {}, 1);
}

// ---------------------------------------------------------------------------------------
// Refinement

namespace {

std::map<Mesh::EdgeKey, BoundaryEdgeSpec> boundary_specs(const Mesh& mesh) {
  std::map<Mesh::EdgeKey, BoundaryEdgeSpec> out;
  for (int i = 0; i < mesh.num_edges(); ++i)
    if (mesh.is_boundary_edge(i)) out[{mesh.edge(i)[0], mesh.edge(i)[1]}] = {mesh.edge_marker(i), mesh.edge_curve(i)};
  return out;
}

/// Creates midpoints for the given edges, appending to verts; curved edges get the arc midpoint.
std::map<Mesh::EdgeKey, int> split_edges(const Mesh& mesh, const std::vector<int>& edges, std::vector<Vec2>& verts,
                                         std::map<Mesh::EdgeKey, BoundaryEdgeSpec>& bnd) {
  std::map<Mesh::EdgeKey, int> mid;
  for (int i : edges) {
    const auto& ed = mesh.edge(i);
    const Vec2& a = mesh.vertex(ed[0]);
    const Vec2& b = mesh.vertex(ed[1]);
    Vec2 x = 0.5 * (a + b);
    if (mesh.edge_curve(i) >= 0) x = arc_point(mesh.curves()[mesh.edge_curve(i)], a, b, 0.0);
    const int id = static_cast<int>(verts.size());
    verts.push_back(x);
    const Mesh::EdgeKey k{ed[0], ed[1]};
    mid[k] = id;
    auto it = bnd.find(k);
    if (it != bnd.end()) {
      const BoundaryEdgeSpec spec = it->second;
      bnd.erase(it);
      bnd[key(ed[0], id)] = spec;
      bnd[key(id, ed[1])] = spec;
    }
  }
  return mid;
}

}  // namespace

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Vec2> verts = mesh.vertices();
  auto bnd = boundary_specs(mesh);
  std::vector<int> all(mesh.num_edges());
  for (int i = 0; i < mesh.num_edges(); ++i) all[i] = i;
  const auto mid = split_edges(mesh, all, verts, bnd);
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.num_elements());
  for (const auto& t : mesh.triangles()) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid.at(key(a, b)), ac = mid.at(key(a, c)), bc = mid.at(key(b, c));
    tris.push_back({a, ab, ac});
    tris.push_back({ab, b, bc});
    tris.push_back({ac, bc, c});
    tris.push_back({ab, bc, ac});
  }
  return Mesh(std::move(verts), std::move(tris), bnd, mesh.curves(), mesh.geo_order());
}

Mesh refine(const Mesh& mesh, const std::vector<int>& marked) {
  if (marked.empty()) throw std::invalid_argument("refine: no elements marked");
  std::vector<char> edge_marked(mesh.num_edges(), 0);
  for (int e : marked) {
    if (e < 0 || e >= mesh.num_elements()) throw std::invalid_argument("refine: marked element out of range");
    for (int le = 0; le < 3; ++le) edge_marked[mesh.element_edge(e, le)] = 1;
  }
  auto ref_edge_index = [&](int e) { return *mesh.find_edge(mesh.refinement_edge(e).first, mesh.refinement_edge(e).second); };
  for (bool changed = true; changed;) {
    changed = false;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const int r = ref_edge_index(e);
      if (edge_marked[r]) continue;
      for (int le = 0; le < 3; ++le)
        if (edge_marked[mesh.element_edge(e, le)]) {
          edge_marked[r] = 1;
          changed = true;
          break;
        }
    }
  }

  std::vector<Vec2> verts = mesh.vertices();
  auto bnd = boundary_specs(mesh);
  std::vector<int> split;
  for (int i = 0; i < mesh.num_edges(); ++i)
    if (edge_marked[i]) split.push_back(i);
  const auto mid = split_edges(mesh, split, verts, bnd);

  std::vector<std::array<int, 3>> tris;
  std::vector<Mesh::EdgeKey> refs;
  // (apex, b, c) with refinement edge (b, c); bisection creates the newest vertex m.
  std::function<void(int, int, int)> bisect = [&](int apex, int b, int c) {
    auto it = mid.find(key(b, c));
    if (it == mid.end()) {
      tris.push_back({apex, b, c});
      refs.push_back(key(b, c));
      return;
    }
    const int m = it->second;
    bisect(m, apex, b);
    bisect(m, c, apex);
  };
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.triangle(e);
    const auto [b, c] = mesh.refinement_edge(e);
    int apex = -1;
    for (int v : t)
      if (v != b && v != c) apex = v;
    bisect(apex, b, c);
  }
  return Mesh(std::move(verts), std::move(tris), bnd, mesh.curves(), mesh.geo_order(), std::move(refs));
}

}  // namespace hzplate
