#include "hzplate/recovery.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "hzplate/quadrature.hpp"

namespace hzplate {

namespace {

struct LagrangeNode {
  std::array<int, 3> count;  // barycentric multiples of 1/p for λ1, λ2, λ3
  Vec2 xi;
};

std::vector<LagrangeNode> lagrange_nodes(int p) {
  std::vector<LagrangeNode> out;
  for (int c = 0; c <= p; ++c)
    for (int b = 0; b + c <= p; ++b) {
      const int a = p - b - c;
      out.push_back({{a, b, c}, Vec2(double(c) / p, double(b) / p)});
    }
  return out;
}

Eigen::RowVectorXd monomials(int p, const Vec2& xi) {
  Eigen::RowVectorXd m((p + 1) * (p + 2) / 2);
  int k = 0;
  for (int i = 0; i <= p; ++i)
    for (int j = 0; i + j <= p; ++j) m[k++] = std::pow(xi[0], i) * std::pow(xi[1], j);
  return m;
}

using NodeKey = std::tuple<int, int, int>;

NodeKey node_key(const Mesh& mesh, int e, int p, int local, const LagrangeNode& n) {
  int nonzero = 0;
  for (int c : n.count) nonzero += c > 0 ? 1 : 0;
  if (nonzero == 1) {
    for (int v = 0; v < 3; ++v)
      if (n.count[v] == p) return {0, mesh.triangle(e)[v], 0};
  }
  if (nonzero == 2) {
    const auto& ref = reference_edges();
    for (int le = 0; le < 3; ++le) {
      const auto [i, j] = ref[le].vertices;
      if (n.count[i] + n.count[j] != p) continue;
      const int k = n.count[j];  // steps from local vertex i towards j
      return {1, mesh.element_edge(e, le), mesh.edge_orientation(e, le) > 0 ? k : p - k};
    }
  }
  return {2, e, local};
}

}  // namespace

RecoveryEstimate recovery_estimate(const SolutionFields& fields) {
  const Mesh& mesh = *fields.mesh;
  const int p = fields.p;
  const auto nodes = lagrange_nodes(p);
  const int nn = static_cast<int>(nodes.size());

  Eigen::MatrixXd vander(nn, nn);
  for (int i = 0; i < nn; ++i) vander.row(i) = monomials(p, nodes[i].xi);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vander);

  std::map<NodeKey, std::pair<Eigen::Vector3d, int>> sums;
  std::vector<std::vector<NodeKey>> keys(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int i = 0; i < nn; ++i) {
      const NodeKey k = node_key(mesh, e, p, i, nodes[i]);
      keys[e].push_back(k);
      auto& s = sums.try_emplace(k, Eigen::Vector3d::Zero(), 0).first->second;
      s.first += evaluate_fields(fields, e, nodes[i].xi).m.coords();
      s.second += 1;
    }

  const QuadratureRule& rule = triangle_quadrature(std::min(2 * p + 2 * mesh.geo_order(), kMaxQuadratureDegree));
  // interp(q, :) = m(x_q)ᵀ V⁻¹ maps nodal values to values at quadrature point q.
  const Eigen::MatrixXd vinv = lu.inverse();
  Eigen::MatrixXd interp(rule.size(), nn);
  for (std::size_t q = 0; q < rule.size(); ++q) interp.row(static_cast<Eigen::Index>(q)) = monomials(p, rule.points[q]) * vinv;

  RecoveryEstimate out;
  out.contributions.assign(mesh.num_elements(), 0.0);
  double norm = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    Eigen::MatrixXd nodal(nn, 3);
    for (int i = 0; i < nn; ++i) {
      const auto& s = sums.at(keys[e][i]);
      nodal.row(i) = (s.first / s.second).transpose();
    }
    const Eigen::MatrixXd rec = interp * nodal;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const GeometryPoint g = mesh.geometry(e, rule.points[q]);
      const double w = rule.weights[q] * g.det;
      const Eigen::Vector3d r = rec.row(static_cast<Eigen::Index>(q)).transpose();
      const Eigen::Vector3d m = evaluate_fields(fields, e, rule.points[q]).m.coords();
      out.contributions[e] += w * (r - m).squaredNorm();
      norm += w * r.squaredNorm();
    }
  }
  if (!(norm > 0.0)) throw std::domain_error("recovery_estimate: recovered moment field vanishes");
  double total = 0.0;
  for (double& c : out.contributions) {
    c /= norm;
    total += c;
  }
  out.estimate = std::sqrt(total);
  return out;
}

std::vector<int> dorfler_mark(const std::vector<double>& contributions, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("dorfler_mark: theta must lie in (0, 1]");
  double total = 0.0;
  for (double c : contributions) {
    if (c < 0.0) throw std::invalid_argument("dorfler_mark: negative contribution");
    total += c;
  }
  std::vector<int> order(contributions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return contributions[a] > contributions[b]; });
  std::vector<int> marked;
  double acc = 0.0;
  for (int e : order) {
    if (acc >= theta * total && !marked.empty()) break;
    marked.push_back(e);
    acc += contributions[e];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

}  // namespace hzplate
