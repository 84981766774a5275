#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "hzplate/fe_space.hpp"
#include "hzplate/formulations.hpp"
#include "hzplate/mesh.hpp"
#include "hzplate/mesh_io.hpp"
#include "hzplate/basis.hpp"
#include "hzplate/quadrature.hpp"

namespace hzplate::oracle {

// Moves every interior vertex by up to `amount` times the shortest incident edge length.
inline Mesh perturb_interior(const Mesh& mesh, double amount, unsigned seed) {
  std::vector<double> shortest(mesh.num_vertices(), 1e300);
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const auto [a, b] = mesh.edge(i);
    const double len = (mesh.vertex(a) - mesh.vertex(b)).norm();
    shortest[a] = std::min(shortest[a], len);
    shortest[b] = std::min(shortest[b], len);
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto doc = nlohmann::json::parse(mesh_to_json(mesh));
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) continue;
    doc["vertices"][v][0] = mesh.vertex(v)[0] + amount * shortest[v] * u(rng);
    doc["vertices"][v][1] = mesh.vertex(v)[1] + amount * shortest[v] * u(rng);
  }
  return mesh_from_json(doc.dump());
}

inline Mesh random_straight_mesh(unsigned seed) { return perturb_interior(square_mesh(5), 0.3, seed); }
inline Mesh random_curved_mesh(unsigned seed) { return perturb_interior(refine_uniform(disk_mesh(24, 3)), 0.25, seed); }

// Reference coordinates on element e of the point at parameter s along global edge i,
// measured from its lower-index vertex.
inline Vec2 edge_point(const Mesh& mesh, int e, int i, double s) {
  static const std::array<Vec2, 3> corners = {Vec2(0.0, 0.0), Vec2(0.0, 1.0), Vec2(1.0, 0.0)};
  const auto& tri = mesh.triangle(e);
  const auto [lo, hi] = mesh.edge(i);
  int llo = -1, lhi = -1;
  for (int k = 0; k < 3; ++k) {
    if (tri[k] == lo) llo = k;
    if (tri[k] == hi) lhi = k;
  }
  return (1.0 - s) * corners[llo] + s * corners[lhi];
}

struct JumpReport {
  double max_jump = 0.0;       // largest |M_a n - M_b n| (HZ) or |v_a·n - v_b·n| (RT)
  double max_position = 0.0;   // largest mismatch of the physical points seen from both sides
  double max_value = 0.0;      // largest trace magnitude, for scale
};

// Normal-trace jumps of every global basis function of an HZ or RT space across all
// interior edges, at Gauss points of degree `degree`.
inline JumpReport normal_trace_jumps(const FeSpace& space, int degree) {
  const Mesh& mesh = space.mesh();
  const bool hz = space.desc().kind == SpaceKind::HZ;
  const GaussRule1D& rule = line_quadrature(degree);
  JumpReport rep;
  BasisEval ea, eb;
  for (int i = 0; i < mesh.num_edges(); ++i) {
    if (mesh.is_boundary_edge(i)) continue;
    const auto [a, b] = mesh.edge_elements(i);
    const Vec2 n = rotate_ccw(mesh.vertex(mesh.edge(i)[1]) - mesh.vertex(mesh.edge(i)[0])).normalized();
    const auto da = space.element_dofs(a);
    const auto db = space.element_dofs(b);
    for (double r : rule.points) {
      const double s = 0.5 * (r + 1.0);
      const GeometryPoint ga = mesh.geometry(a, edge_point(mesh, a, i, s));
      const GeometryPoint gb = mesh.geometry(b, edge_point(mesh, b, i, s));
      rep.max_position = std::max(rep.max_position, (ga.x - gb.x).norm());
      space.evaluate(a, edge_point(mesh, a, i, s), ga, ea);
      space.evaluate(b, edge_point(mesh, b, i, s), gb, eb);
      auto trace = [&](const BasisEval& ev, int col) -> Vec2 {
        if (hz) return SymMatrix2::from_coords(ev.value.col(col)) * n;
        return Vec2(ev.value.col(col).dot(n), 0.0);
      };
      std::map<int, Vec2> total;
      auto slot = [&](int dof) -> Vec2& { return total.try_emplace(dof, Vec2::Zero()).first->second; };
      for (std::size_t k = 0; k < da.size(); ++k) slot(da[k]) += trace(ea, static_cast<int>(k));
      for (std::size_t k = 0; k < db.size(); ++k) {
        const Vec2 tb = trace(eb, static_cast<int>(k));
        slot(db[k]) -= tb;
        rep.max_value = std::max(rep.max_value, tb.norm());
      }
      for (const auto& [dof, jump] : total) rep.max_jump = std::max(rep.max_jump, jump.norm());
    }
  }
  return rep;
}

// Largest relative mismatch between the divergence reported by the space and fourth-order
// central differences of its values in physical coordinates, at an interior point of
// element e. The step is `rel_step` times the element diameter.
inline double divergence_fd_error(const FeSpace& space, int e, const Vec2& xi, double rel_step = 1e-3) {
  const Mesh& mesh = space.mesh();
  const bool hz = space.desc().kind == SpaceKind::HZ;
  const auto& tri = mesh.triangle(e);
  double diam = 0.0;
  for (int a = 0; a < 3; ++a) diam = std::max(diam, (mesh.vertex(tri[a]) - mesh.vertex(tri[(a + 1) % 3])).norm());
  const double step = rel_step * diam;
  const GeometryPoint g = mesh.geometry(e, xi);
  BasisEval ev;
  space.evaluate(e, xi, g, ev);
  const Eigen::MatrixXd div = ev.div;
  auto value_at = [&](const Vec2& x) {
    const auto loc = locate(mesh, x);
    if (!loc || loc->first != e) throw std::runtime_error("finite-difference point left the element");
    BasisEval es;
    space.evaluate(e, loc->second, mesh.geometry(e, loc->second), es);
    return Eigen::MatrixXd(es.value);
  };
  Eigen::MatrixXd fd = Eigen::MatrixXd::Zero(div.rows(), div.cols());
  for (int dir = 0; dir < 2; ++dir) {
    Vec2 dx = Vec2::Zero();
    dx[dir] = step;
    const Eigen::MatrixXd d =
        (8.0 * (value_at(g.x + dx) - value_at(g.x - dx)) - (value_at(g.x + 2 * dx) - value_at(g.x - 2 * dx))) /
        (12.0 * step);
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      if (hz) {
        // row i of the divergence collects ∂_j M_ij
        const Mat2 dm = SymMatrix2::from_coords(d.col(c)).matrix();
        fd(0, c) += dm(0, dir);
        fd(1, c) += dm(1, dir);
      } else {
        fd(0, c) += d(dir, c);
      }
    }
  }
  double worst = 0.0;
  for (Eigen::Index c = 0; c < div.cols(); ++c) {
    const double scale = std::max(div.col(c).norm(), 1e-3 * div.norm() / std::sqrt(double(div.cols())));
    worst = std::max(worst, (fd.col(c) - div.col(c)).norm() / scale);
  }
  return worst;
}

struct ProjectionResidual {
  double affine = 0.0;
  double curved = 0.0;
};

// Worst relative L² residual ‖d - Πd‖ / ‖d‖ over local HZ^p functions, split into affine
// and curved elements, where d is the row-wise divergence and Π the element L² projection
// onto [DG^{p-1}]². Functions with ‖d‖ below 1e-10 times the element maximum count as
// divergence-free.
inline ProjectionResidual divergence_projection_residual(const FeSpace& hz, int degree) {
  const Mesh& mesh = hz.mesh();
  const int p = hz.desc().order;
  const QuadratureRule& rule = triangle_quadrature(degree);
  const int nq = static_cast<int>(rule.size());
  ProjectionResidual worst;
  BasisEval ev;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double& slot = mesh.is_curved(e) ? worst.curved : worst.affine;
    const int nd = scalar_local_dim(p - 1);
    Eigen::MatrixXd phi(nq, nd);
    Eigen::VectorXd w(nq);
    Eigen::MatrixXd d0(nq, hz.local_dim()), d1(nq, hz.local_dim());
    for (int q = 0; q < nq; ++q) {
      const GeometryPoint g = mesh.geometry(e, rule.points[q]);
      Eigen::MatrixXd v, grad;
      scalar_evaluate(p - 1, {1, 1, 1}, rule.points[q], g, v, grad);
      phi.row(q) = v.row(0);
      w[q] = rule.weights[q] * g.det;
      hz.evaluate(e, rule.points[q], g, ev);
      d0.row(q) = ev.div.row(0);
      d1.row(q) = ev.div.row(1);
    }
    const Eigen::MatrixXd wphi = w.asDiagonal() * phi;
    const Eigen::LDLT<Eigen::MatrixXd> mass(phi.transpose() * wphi);
    const Eigen::MatrixXd r0 = d0 - phi * mass.solve(wphi.transpose() * d0);
    const Eigen::MatrixXd r1 = d1 - phi * mass.solve(wphi.transpose() * d1);
    Eigen::VectorXd norm2(hz.local_dim()), res2(hz.local_dim());
    for (int c = 0; c < hz.local_dim(); ++c) {
      norm2[c] = w.dot(d0.col(c).cwiseAbs2() + d1.col(c).cwiseAbs2());
      res2[c] = w.dot(r0.col(c).cwiseAbs2() + r1.col(c).cwiseAbs2());
    }
    const double top = norm2.maxCoeff();
    for (int c = 0; c < hz.local_dim(); ++c)
      if (norm2[c] > 1e-20 * top) slot = std::max(slot, std::sqrt(res2[c] / norm2[c]));
  }
  return worst;
}

}  // namespace hzplate::oracle
