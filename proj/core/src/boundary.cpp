#include "hzplate/boundary.hpp"

#include <stdexcept>
#include <string>

#include "hzplate/polynomials.hpp"
#include "hzplate/quadrature.hpp"

namespace hzplate {

void Constraints::fix_all(const std::vector<int>& dofs, int offset, double value) {
  for (int d : dofs) fixed[offset + d] = value;
}

ReducedSystem reduce(const SparseSystem& system, const Constraints& constraints) {
  const int n = system.size();
  ReducedSystem r;
  std::vector<Eigen::Triplet<double>> pt;
  std::vector<char> in_transform(n, 0);
  for (const auto& t : constraints.transforms)
    for (int i = 0; i < 3; ++i) {
      if (t.dofs[i] < 0 || t.dofs[i] >= n) throw std::invalid_argument("reduce: transformed dof out of range");
      if (in_transform[t.dofs[i]]) throw std::invalid_argument("reduce: dof appears in two transforms");
      in_transform[t.dofs[i]] = 1;
      for (int j = 0; j < 3; ++j)
        if (t.T(i, j) != 0.0) pt.emplace_back(t.dofs[i], t.dofs[j], t.T(i, j));
    }
  for (int i = 0; i < n; ++i)
    if (!in_transform[i]) pt.emplace_back(i, i, 1.0);
  r.transform.resize(n, n);
  r.transform.setFromTriplets(pt.begin(), pt.end());

  SparseMatrix k;
  Eigen::VectorXd b;
  if (constraints.transforms.empty()) {
    k = system.matrix;
    b = system.rhs;
  } else {
    const SparseMatrix pt_t = r.transform.transpose();
    k = pt_t * system.matrix * r.transform;
    b = pt_t * system.rhs;
  }

  r.fixed_values.setZero(n);
  r.reduced_index.assign(n, -1);
  std::vector<char> is_fixed(n, 0);
  for (const auto& [d, v] : constraints.fixed) {
    if (d < 0 || d >= n) throw std::invalid_argument("reduce: fixed dof " + std::to_string(d) + " out of range");
    is_fixed[d] = 1;
    r.fixed_values[d] = v;
  }
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) {
      r.reduced_index[i] = static_cast<int>(r.free.size());
      r.free.push_back(i);
    }
  const int nf = static_cast<int>(r.free.size());
  r.rhs.resize(nf);
  for (int i = 0; i < nf; ++i) r.rhs[i] = b[r.free[i]];
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(k.nonZeros());
  for (int c = 0; c < k.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(k, c); it; ++it) {
      const int ri = r.reduced_index[it.row()];
      if (ri < 0) continue;
      const int ci = r.reduced_index[it.col()];
      if (ci >= 0)
        trip.emplace_back(ri, ci, it.value());
      else
        r.rhs[ri] -= it.value() * r.fixed_values[it.col()];
    }
  r.matrix.resize(nf, nf);
  r.matrix.setFromTriplets(trip.begin(), trip.end());
  return r;
}

Eigen::VectorXd expand(const ReducedSystem& reduced, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(reduced.free.size())) throw std::invalid_argument("expand: size mismatch");
  Eigen::VectorXd full = reduced.fixed_values;
  for (std::size_t i = 0; i < reduced.free.size(); ++i) full[reduced.free[i]] = x[static_cast<Eigen::Index>(i)];
  return reduced.transform * full;
}

namespace {

bool selected(const Mesh& mesh, int edge, const std::set<int>& markers) {
  return mesh.is_boundary_edge(edge) && (markers.empty() || markers.count(mesh.edge_marker(edge)) > 0);
}

int local_edge_of(const Mesh& mesh, int e, int edge) {
  for (int le = 0; le < 3; ++le)
    if (mesh.element_edge(e, le) == edge) return le;
  throw std::logic_error("edge not attached to element");
}

const std::array<Vec2, 3> kRefVertices = {Vec2(0.0, 0.0), Vec2(0.0, 1.0), Vec2(1.0, 0.0)};

Vec2 edge_point(int le, double s) {
  const auto [a, b] = reference_edges()[le].vertices;
  return 0.5 * (1.0 - s) * kRefVertices[a] + 0.5 * (1.0 + s) * kRefVertices[b];
}

}  // namespace

void for_each_boundary_point(const Mesh& mesh, const std::set<int>& markers, int degree,
                             const std::function<void(int, int, const Vec2&, const GeometryPoint&, const Vec2&, double)>& f) {
  const GaussRule1D& line = line_quadrature(degree);
  const auto& ref = reference_edges();
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (!selected(mesh, i, markers)) continue;
    const int e = mesh.edge_elements(i)[0];
    const int le = local_edge_of(mesh, e, i);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const Vec2 xi = edge_point(le, line.points[q]);
      const GeometryPoint g = mesh.geometry(e, xi);
      const Vec2 n = (g.cof * ref[le].nu).normalized();
      const double ds = 0.5 * (g.J * ref[le].tau).norm() * line.weights[q];
      f(e, le, xi, g, n, ds);
    }
  }
}

std::pair<Vec2, Vec2> boundary_vertex_frame(const Mesh& mesh, int vertex, const std::set<int>& markers) {
  const auto& ref = reference_edges();
  Vec2 sum = Vec2::Zero();
  int count = 0;
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (!selected(mesh, i, markers)) continue;
    const auto& ed = mesh.edge(i);
    if (ed[0] != vertex && ed[1] != vertex) continue;
    const int e = mesh.edge_elements(i)[0];
    const int le = local_edge_of(mesh, e, i);
    int lv = 0;
    while (mesh.triangle(e)[lv] != vertex) ++lv;
    const GeometryPoint g = mesh.geometry(e, kRefVertices[lv]);
    sum += (g.cof * ref[le].nu).normalized();
    ++count;
  }
  if (count == 0) throw std::invalid_argument("boundary_vertex_frame: vertex " + std::to_string(vertex) + " has no constrained edge");
  if (sum.norm() < 1e-10)
    throw std::domain_error("boundary_vertex_frame: antiparallel edge normals at vertex " + std::to_string(vertex));
  const Vec2 d2 = sum.normalized();
  const Vec2 d1(d2[1], -d2[0]);
  return {d1, d2};
}

void add_hz_dirichlet(Constraints& constraints, const FeSpace& hz, int offset,
                      const std::function<SymMatrix2(const Vec2&)>& moment, const std::set<int>& markers) {
  if (hz.desc().kind != SpaceKind::HZ) throw std::invalid_argument("add_hz_dirichlet: not a Hu-Zhang space");
  const Mesh& mesh = hz.mesh();
  const int p = hz.desc().order;

  std::set<int> verts;
  for (int i = 0; i < mesh.num_edges(); ++i)
    if (selected(mesh, i, markers)) {
      verts.insert(mesh.edge(i)[0]);
      verts.insert(mesh.edge(i)[1]);
    }
  for (int v : verts) {
    const auto [d1, d2] = boundary_vertex_frame(mesh, v, markers);
    const std::array<SymMatrix2, 3> frame = {SymMatrix2::dyad(d1, d1), SymMatrix2::dyad(d1, d2), SymMatrix2::dyad(d2, d2)};
    Constraints::Transform t;
    for (int c = 0; c < 3; ++c) {
      t.dofs[c] = offset + 3 * v + c;
      t.T.col(c) = Eigen::Vector3d(frame[c].m11, 2.0 * frame[c].m12, frame[c].m22);
    }
    constraints.transforms.push_back(t);
    const SymMatrix2 m = moment(mesh.vertex(v));
    constraints.fix(offset + 3 * v + 1, 2.0 * inner(frame[1], m));
    constraints.fix(offset + 3 * v + 2, inner(frame[2], m));
  }

  const int nshared = 2 * (p - 1);
  const GaussRule1D& line = line_quadrature(2 * p + 2 * mesh.geo_order() + 2);
  const auto& ref = reference_edges();
  Eigen::MatrixXd val, div;
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (!selected(mesh, i, markers)) continue;
    const int e = mesh.edge_elements(i)[0];
    const int le = local_edge_of(mesh, e, i);
    const auto [la, lb] = ref[le].vertices;
    const SymMatrix2 ma = moment(mesh.vertex(mesh.triangle(e)[la]));
    const SymMatrix2 mb = moment(mesh.vertex(mesh.triangle(e)[lb]));
    const int first = 9 + le * nshared;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nshared, nshared);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nshared);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      const Vec2 xi = edge_point(le, s);
      const GeometryPoint g = mesh.geometry(e, xi);
      const double ds = 0.5 * (g.J * ref[le].tau).norm() * line.weights[q];
      hz_evaluate(mesh, e, p, xi, g, val, div);
      const SymMatrix2 vertex_part = (0.5 * (1.0 - s)) * ma + (0.5 * (1.0 + s)) * mb;
      const Eigen::Vector3d r = (moment(g.x) - vertex_part).coords();
      const Eigen::MatrixXd rho = val.middleCols(first, nshared);
      k.noalias() += ds * rho.transpose() * rho;
      f.noalias() += ds * rho.transpose() * r;
    }
    const Eigen::VectorXd c = k.ldlt().solve(f);
    const auto dofs = hz.element_dofs(e);
    for (int j = 0; j < nshared; ++j) constraints.fix(offset + dofs[first + j], c[j]);
  }
}

void add_lagrange_dirichlet(Constraints& constraints, const FeSpace& space, int offset,
                            const std::function<Eigen::VectorXd(const Vec2&)>& value, const std::set<int>& markers) {
  if (space.desc().kind != SpaceKind::Lagrange) throw std::invalid_argument("add_lagrange_dirichlet: not a Lagrange space");
  const Mesh& mesh = space.mesh();
  const int p = space.desc().order;
  const int nc = space.desc().ncomp;
  const int nscalar = space.num_dofs() / nc;
  const int nloc = space.local_dim() / nc;
  auto checked = [&](const Vec2& x) {
    Eigen::VectorXd v = value(x);
    if (v.size() != nc) throw std::invalid_argument("add_lagrange_dirichlet: data has the wrong number of components");
    return v;
  };

  std::set<int> verts;
  for (int i = 0; i < mesh.num_edges(); ++i)
    if (selected(mesh, i, markers)) {
      verts.insert(mesh.edge(i)[0]);
      verts.insert(mesh.edge(i)[1]);
    }
  for (int v : verts) {
    const Eigen::VectorXd u = checked(mesh.vertex(v));
    for (int c = 0; c < nc; ++c) constraints.fix(offset + c * nscalar + v, u[c]);
  }
  if (p < 2) return;

  const int ne = p - 1;
  const GaussRule1D& line = line_quadrature(2 * p + 2 * mesh.geo_order() + 2);
  const auto& ref = reference_edges();
  BasisEval ev;
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (!selected(mesh, i, markers)) continue;
    const int e = mesh.edge_elements(i)[0];
    const int le = local_edge_of(mesh, e, i);
    const auto [la, lb] = ref[le].vertices;
    const Eigen::VectorXd ua = checked(mesh.vertex(mesh.triangle(e)[la]));
    const Eigen::VectorXd ub = checked(mesh.vertex(mesh.triangle(e)[lb]));
    const int first = 3 + le * ne;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ne, ne);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(ne, nc);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      const Vec2 xi = edge_point(le, s);
      const GeometryPoint g = mesh.geometry(e, xi);
      const double ds = 0.5 * (g.J * ref[le].tau).norm() * line.weights[q];
      space.evaluate(e, xi, g, ev);
      const Eigen::VectorXd r = checked(g.x) - (0.5 * (1.0 - s)) * ua - (0.5 * (1.0 + s)) * ub;
      const Eigen::RowVectorXd rho = ev.value.block(0, first, 1, ne);
      k.noalias() += ds * rho.transpose() * rho;
      f.noalias() += ds * rho.transpose() * r.transpose();
    }
    const Eigen::MatrixXd c = k.ldlt().solve(f);
    const auto dofs = space.element_dofs(e);
    for (int comp = 0; comp < nc; ++comp)
      for (int j = 0; j < ne; ++j) constraints.fix(offset + dofs[comp * nloc + first + j], c(j, comp));
  }
}

Eigen::VectorXd rotation_neumann(const FeSpace& hz, const std::function<Vec2(const Vec2&)>& rotation,
                                 const std::set<int>& markers) {
  if (hz.desc().kind != SpaceKind::HZ) throw std::invalid_argument("rotation_neumann: not a Hu-Zhang space");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(hz.num_dofs());
  const int p = hz.desc().order;
  BasisEval ev;
  for_each_boundary_point(hz.mesh(), markers, 2 * p + 2 * hz.mesh().geo_order() + 2,
                          [&](int e, int, const Vec2& xi, const GeometryPoint& g, const Vec2& n, double ds) {
                            hz.evaluate(e, xi, g, ev);
                            const Vec2 phi = rotation(g.x);
                            const auto dofs = hz.element_dofs(e);
                            for (int l = 0; l < hz.local_dim(); ++l)
                              b[dofs[l]] += ds * (SymMatrix2::from_coords(ev.value.col(l)) * n).dot(phi);
                          });
  return b;
}

Eigen::VectorXd deflection_neumann(const FeSpace& rt, const std::function<double(const Vec2&)>& deflection,
                                   const std::set<int>& markers) {
  if (rt.desc().kind != SpaceKind::RT) throw std::invalid_argument("deflection_neumann: not a Raviart-Thomas space");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rt.num_dofs());
  const int k = rt.desc().order;
  BasisEval ev;
  for_each_boundary_point(rt.mesh(), markers, 2 * k + 2 * rt.mesh().geo_order() + 2,
                          [&](int e, int, const Vec2& xi, const GeometryPoint& g, const Vec2& n, double ds) {
                            rt.evaluate(e, xi, g, ev);
                            const double w = deflection(g.x);
                            const auto dofs = rt.element_dofs(e);
                            for (int l = 0; l < rt.local_dim(); ++l) b[dofs[l]] += ds * ev.value.col(l).dot(n) * w;
                          });
  return b;
}

}  // namespace hzplate
