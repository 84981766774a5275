#include "hzplate/basis.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "hzplate/jet.hpp"
#include "hzplate/polynomials.hpp"
#include "hzplate/quadrature.hpp"

namespace hzplate {

namespace {

const std::array<SymMatrix2, 3>& cartesian_templates() {
  static const std::array<SymMatrix2, 3> t = {SymMatrix2{1.0, 0.0, 0.0}, SymMatrix2{0.0, 0.5, 0.0}, SymMatrix2{0.0, 0.0, 1.0}};
  return t;
}

const std::array<Vec2, 3>& reference_vertices() {
  static const std::array<Vec2, 3> v = {Vec2(0.0, 0.0), Vec2(0.0, 1.0), Vec2(1.0, 0.0)};
  return v;
}

/// Edge endpoints (lo, hi) in local vertex numbering for an orientation sign.
std::array<int, 2> oriented_edge(int le, int sign) {
  const auto& v = reference_edges()[le].vertices;
  return sign > 0 ? v : std::array<int, 2>{v[1], v[0]};
}

/// Scalar kernels shared by the hierarchical scalar and tensor bases.
struct Kernels {
  std::array<Jet, 3> lam;
  std::array<std::vector<Jet>, 3> edge;  // edge[le][a], a = 2..p
  std::vector<Jet> cell;                 // in hz cell ordering
};

void compute_kernels(int p, const std::array<int, 3>& signs, const Vec2& xi, Kernels& k) {
  k.lam = barycentric(Jet::variable(xi[0], 0), Jet::variable(xi[1], 1));
  k.cell.clear();
  if (p < 2) return;
  for (int le = 0; le < 3; ++le) {
    const auto [lo, hi] = oriented_edge(le, signs[le]);
    scaled_integrated_legendre_all(p, k.lam[hi] - k.lam[lo], k.lam[lo] + k.lam[hi], k.edge[le]);
  }
  if (p < 3) return;
  std::vector<Jet> ls;
  std::vector<Jet> leg;
  scaled_integrated_legendre_all(p, k.lam[2] - k.lam[0], k.lam[0] + k.lam[2], ls);
  legendre_all(p, 2.0 * Jet::variable(xi[0], 0) - 1.0, leg);
  for (int a = 2; a <= p - 1; ++a)
    for (int kk = 0; a + kk + 1 <= p; ++kk) k.cell.push_back(k.lam[1] * ls[a] * leg[kk]);
}

Vec2 physical_gradient(const Jet& f, const GeometryPoint& g) { return g.Jinv.transpose() * Vec2(f.d[0], f.d[1]); }

void put(Eigen::MatrixXd& value, Eigen::MatrixXd& div, int col, const SymMatrix2& v, const Vec2& d) {
  value.col(col) = v.coords();
  div.col(col) = d;
}

}  // namespace

int hz_local_dim(int p) { return 3 * (p + 1) * (p + 2) / 2; }
int hz_cell_kernel_count(int p) { return (p - 1) * (p - 2) / 2; }

std::vector<HzFunctionInfo> hz_reference_basis(int p) {
  if (p < 3) throw std::invalid_argument("hz_reference_basis: polynomial order must be at least 3");
  std::vector<HzFunctionInfo> out;
  const auto& cart = cartesian_templates();
  for (int v = 0; v < 3; ++v)
    for (int c = 0; c < 3; ++c) out.push_back({HzClass::Vertex, v, 1, 0, cart[c]});
  const auto& ref = reference_edges();
  for (int le = 0; le < 3; ++le)
    for (int a = 2; a <= p; ++a) {
      out.push_back({HzClass::EdgeTangentNormal, le, a, 0, SymMatrix2::dyad(ref[le].tau, ref[le].nu)});
      out.push_back({HzClass::EdgeNormalNormal, le, a, 0, SymMatrix2::dyad(ref[le].nu, ref[le].nu)});
    }
  for (int le = 0; le < 3; ++le)
    for (int a = 2; a <= p; ++a) out.push_back({HzClass::EdgeTangentTangent, le, a, 0, SymMatrix2::dyad(ref[le].tau, ref[le].tau)});
  const auto cell = hz_cell_basis(p);
  out.insert(out.end(), cell.begin(), cell.end());
  return out;
}

std::vector<HzFunctionInfo> hz_cell_basis(int p) {
  if (p < 3) throw std::invalid_argument("hz_cell_basis: polynomial order must be at least 3");
  std::vector<HzFunctionInfo> out;
  const auto& cart = cartesian_templates();
  for (int a = 2; a <= p - 1; ++a)
    for (int k = 0; a + k + 1 <= p; ++k)
      for (int c = 0; c < 3; ++c) out.push_back({HzClass::Cell, -1, a, k, cart[c]});
  return out;
}

double hz_edge_kernel(int a, int edge, const Vec2& xi) {
  if (a < 2) throw std::invalid_argument("hz_edge_kernel: degree must be at least 2");
  if (edge < 0 || edge > 2) throw std::invalid_argument("hz_edge_kernel: local edge must be 0, 1 or 2");
  const auto lam = barycentric(xi[0], xi[1]);
  const auto [i, j] = reference_edges()[edge].vertices;
  return scaled_integrated_legendre(a, lam[j] - lam[i], lam[i] + lam[j]);
}

double hz_cell_kernel(int a, int k, const Vec2& xi) {
  const auto lam = barycentric(xi[0], xi[1]);
  return lam[1] * scaled_integrated_legendre(a, lam[2] - lam[0], lam[0] + lam[2]) * legendre(k, 2.0 * xi[0] - 1.0);
}

void hz_evaluate(const Mesh& mesh, int e, int p, const Vec2& xi, const GeometryPoint& g, Eigen::MatrixXd& value,
                 Eigen::MatrixXd& div) {
  if (p < 3) throw std::invalid_argument("hz_evaluate: polynomial order must be at least 3");
  const int n = hz_local_dim(p);
  value.resize(3, n);
  div.resize(2, n);
  const std::array<int, 3> signs = {mesh.edge_orientation(e, 0), mesh.edge_orientation(e, 1), mesh.edge_orientation(e, 2)};
  thread_local Kernels k;
  compute_kernels(p, signs, xi, k);
  const auto& cart = cartesian_templates();

  int col = 0;
  for (int v = 0; v < 3; ++v) {
    const Vec2 grad = physical_gradient(k.lam[v], g);
    for (int c = 0; c < 3; ++c) put(value, div, col++, k.lam[v].v * cart[c], cart[c] * grad);
  }

  const auto& ref = reference_edges();
  std::array<Vec2, 3> t, n_;
  std::array<std::array<Vec2, 2>, 3> dt, dn;
  for (int le = 0; le < 3; ++le) {
    t[le] = g.J * ref[le].tau;
    n_[le] = g.cof * ref[le].nu;
    for (int d = 0; d < 2; ++d) {
      dt[le][d] = g.dJ[d] * ref[le].tau;
      dn[le][d] = cofactor(g.dJ[d]) * ref[le].nu;
    }
  }
  // Divergence of a field with reference derivatives G_d = ∂ρ/∂ξ_d.
  auto divergence = [&](const std::array<Mat2, 2>& gd) {
    Vec2 out = Vec2::Zero();
    for (int d = 0; d < 2; ++d) out += gd[d] * g.Jinv.row(d).transpose();
    return out;
  };
  // Mapped edge tensor Φ and its reference derivatives for a given role.
  auto edge_tensor = [&](int le, HzClass role, SymMatrix2& phi, std::array<Mat2, 2>& dphi) {
    switch (role) {
      case HzClass::EdgeTangentTangent:
        phi = SymMatrix2::dyad(t[le], t[le]);
        for (int d = 0; d < 2; ++d) dphi[d] = (2.0 * SymMatrix2::dyad(dt[le][d], t[le])).matrix();
        break;
      case HzClass::EdgeTangentNormal: {
        const double s = 0.5 * kEdgeNormalSign[le];
        phi = s * SymMatrix2::dyad(t[le], n_[le]);
        for (int d = 0; d < 2; ++d)
          dphi[d] = (s * (SymMatrix2::dyad(dt[le][d], n_[le]) + SymMatrix2::dyad(t[le], dn[le][d]))).matrix();
        break;
      }
      default:
        phi = SymMatrix2::dyad(n_[le], n_[le]);
        for (int d = 0; d < 2; ++d) dphi[d] = (2.0 * SymMatrix2::dyad(dn[le][d], n_[le])).matrix();
        break;
    }
  };
  // 𝕋 maps τ⊗τ, sym(τ⊗ν), ν⊗ν to t⊗t, ½ sym(t⊗n), n⊗n since |τ| = |ν| on every edge.
  auto edge_function = [&](int le, int a, HzClass role) {
    SymMatrix2 phi;
    std::array<Mat2, 2> dphi;
    edge_tensor(le, role, phi, dphi);
    const Jet& ker = k.edge[le][a];
    std::array<Mat2, 2> gd;
    for (int d = 0; d < 2; ++d) gd[d] = ker.d[d] * phi.matrix() + ker.v * dphi[d];
    put(value, div, col++, ker.v * phi, divergence(gd));
  };
  for (int le = 0; le < 3; ++le)
    for (int a = 2; a <= p; ++a) {
      edge_function(le, a, HzClass::EdgeTangentNormal);
      edge_function(le, a, HzClass::EdgeNormalNormal);
    }
  for (int le = 0; le < 3; ++le)
    for (int a = 2; a <= p; ++a) edge_function(le, a, HzClass::EdgeTangentTangent);
  for (const Jet& ker : k.cell) {
    const Vec2 grad = physical_gradient(ker, g);
    for (int c = 0; c < 3; ++c) put(value, div, col++, ker.v * cart[c], cart[c] * grad);
  }
}

// ---------------------------------------------------------------------------------------
// Raviart-Thomas

int rt_local_dim(int k) { return (k + 1) * (k + 3); }

namespace {

struct RtMonomial {
  int a, b;
  int type;  // 0: (P_a P_b, 0), 1: (0, P_a P_b), 2: (x - c) P_a P_b with a + b = k
};

struct RtReference {
  int k = 0;
  std::vector<RtMonomial> monomials;
  std::array<Eigen::MatrixXd, 8> coeffs;  // indexed by orientation pattern
};

// Jacobi P_n^(alpha, 0) for n = 0..deg.
void jacobi_alpha0_all(int deg, double alpha, const Jet& x, std::vector<Jet>& out) {
  out.assign(static_cast<std::size_t>(deg) + 1, Jet(1.0));
  if (deg >= 1) out[1] = 0.5 * ((alpha + 2.0) * x + alpha);
  for (int n = 2; n <= deg; ++n) {
    const double c = 2.0 * n + alpha;
    const double a1 = 2.0 * n * (n + alpha) * (c - 2.0);
    out[n] = ((c - 1.0) * (c * (c - 2.0) * x + alpha * alpha) * out[n - 1] - 2.0 * (n + alpha - 1.0) * (n - 1.0) * c * out[n - 2]) / a1;
  }
}

// Dubiner polynomial ψ_ab = (1-η)^a P_a(2ξ/(1-η) - 1) P_b^(2a+1,0)(2η - 1), orthogonal on
// the reference triangle. Used for the RT primal set and the interior test functions so
// the moment matrix stays well conditioned as k grows.
Jet dubiner(int a, int b, const Jet& xi, const Jet& eta) {
  thread_local std::vector<Jet> sl, jb;
  scaled_legendre_all(a, 2.0 * xi + eta - 1.0, 1.0 - eta, sl);
  jacobi_alpha0_all(b, 2.0 * a + 1.0, 2.0 * eta - 1.0, jb);
  return sl[a] * jb[b];
}

void monomial_eval(const RtMonomial& m, const Vec2& xi, Vec2& v, double& dv) {
  const Jet base = dubiner(m.a, m.b, Jet::variable(xi[0], 0), Jet::variable(xi[1], 1));
  switch (m.type) {
    case 0:
      v = Vec2(base.v, 0.0);
      dv = base.d[0];
      break;
    case 1:
      v = Vec2(0.0, base.v);
      dv = base.d[1];
      break;
    default: {
      const Vec2 x = xi - Vec2(1.0 / 3.0, 1.0 / 3.0);
      v = base.v * x;
      dv = 2.0 * base.v + x[0] * base.d[0] + x[1] * base.d[1];
      break;
    }
  }
}

std::unique_ptr<RtReference> build_rt(int k) {
  auto r = std::make_unique<RtReference>();
  r->k = k;
  for (int type = 0; type < 2; ++type)
    for (int deg = 0; deg <= k; ++deg)
      for (int a = deg; a >= 0; --a) r->monomials.push_back({a, deg - a, type});
  for (int a = k; a >= 0; --a) r->monomials.push_back({a, k - a, 2});
  const int n = static_cast<int>(r->monomials.size());
  if (n != rt_local_dim(k)) throw std::logic_error("rt: monomial count mismatch");

  const auto& line = line_quadrature(2 * k + 2);
  const auto& tri = triangle_quadrature(2 * k + 1);
  const auto& ref = reference_edges();
  const auto& rv = reference_vertices();
  std::vector<double> leg;
  for (int pattern = 0; pattern < 8; ++pattern) {
    Eigen::MatrixXd dof = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      int row = 0;
      for (int le = 0; le < 3; ++le) {
        const int sign = (pattern >> le) & 1 ? -1 : 1;
        const auto [lo, hi] = oriented_edge(le, sign);
        for (std::size_t q = 0; q < line.points.size(); ++q) {
          const double s = line.points[q];
          const Vec2 pt = 0.5 * (1.0 - s) * rv[lo] + 0.5 * (1.0 + s) * rv[hi];
          Vec2 v;
          double dv;
          monomial_eval(r->monomials[j], pt, v, dv);
          legendre_all(k, s, leg);
          const double flux = kEdgeNormalSign[le] * sign * 0.5 * v.dot(ref[le].nu) * line.weights[q];
          for (int m = 0; m <= k; ++m) dof(row + m, j) += flux * leg[m];
        }
        row += k + 1;
      }
      for (int c = 0; c < 2; ++c)
        for (int deg = 0; deg <= k - 1; ++deg)
          for (int a = deg; a >= 0; --a) {
            for (std::size_t q = 0; q < tri.size(); ++q) {
              Vec2 v;
              double dv;
              monomial_eval(r->monomials[j], tri.points[q], v, dv);
              dof(row, j) += tri.weights[q] * v[c] *
                             dubiner(a, deg - a, Jet(tri.points[q][0]), Jet(tri.points[q][1])).v;
            }
            ++row;
          }
    }
    r->coeffs[pattern] = dof.fullPivLu().inverse();
  }
  return r;
}

const RtReference& rt_reference(int k) {
  if (k < 0 || k > 12) throw std::invalid_argument("rt: order must lie in [0, 12]");
  static std::map<int, std::unique_ptr<RtReference>> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, build_rt(k)).first;
  return *it->second;
}

}  // namespace

void rt_evaluate(const Mesh& mesh, int e, int k, const Vec2& xi, const GeometryPoint& g, Eigen::MatrixXd& value,
                 Eigen::MatrixXd& div) {
  const RtReference& r = rt_reference(k);
  int pattern = 0;
  for (int le = 0; le < 3; ++le)
    if (mesh.edge_orientation(e, le) < 0) pattern |= 1 << le;
  const int n = rt_local_dim(k);
  Eigen::MatrixXd mv(2, n);
  Eigen::RowVectorXd md(n);
  for (int i = 0; i < n; ++i) {
    Vec2 v;
    double dv;
    monomial_eval(r.monomials[i], xi, v, dv);
    mv.col(i) = v;
    md[i] = dv;
  }
  const Eigen::MatrixXd& c = r.coeffs[pattern];
  value = (g.J / g.det) * (mv * c);
  div = (md * c) / g.det;
}

// ---------------------------------------------------------------------------------------
// Scalar hierarchical basis

int scalar_local_dim(int p) { return (p + 1) * (p + 2) / 2; }

void scalar_evaluate(int p, const std::array<int, 3>& edge_signs, const Vec2& xi, const GeometryPoint& g,
                     Eigen::MatrixXd& value, Eigen::MatrixXd& grad) {
  if (p < 0) throw std::invalid_argument("scalar basis: negative degree");
  const int n = scalar_local_dim(p);
  value.resize(1, n);
  grad.resize(2, n);
  if (p == 0) {
    value(0, 0) = 1.0;
    grad.col(0).setZero();
    return;
  }
  thread_local Kernels k;
  compute_kernels(p, edge_signs, xi, k);
  int col = 0;
  auto put_scalar = [&](const Jet& f) {
    value(0, col) = f.v;
    grad.col(col) = physical_gradient(f, g);
    ++col;
  };
  for (int v = 0; v < 3; ++v) put_scalar(k.lam[v]);
  if (p >= 2)
    for (int le = 0; le < 3; ++le)
      for (int a = 2; a <= p; ++a) put_scalar(k.edge[le][a]);
  for (const Jet& f : k.cell) put_scalar(f);
}

}  // namespace hzplate
