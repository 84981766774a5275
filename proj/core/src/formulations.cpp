#include "hzplate/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hzplate/boundary.hpp"
#include "hzplate/condensation.hpp"
#include "hzplate/quadrature.hpp"
#include "hzplate/solver.hpp"

namespace hzplate {

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::PRM: return "prm";
    case Formulation::TFSRM: return "tfsrm";
    case Formulation::QFSRM: return "qfsrm";
  }
  return "unknown";
}

Formulation parse_formulation(const std::string& name) {
  if (name == "prm") return Formulation::PRM;
  if (name == "tfsrm") return Formulation::TFSRM;
  if (name == "qfsrm") return Formulation::QFSRM;
  throw std::invalid_argument("unknown formulation '" + name + "' (expected prm, tfsrm or qfsrm)");
}

void PlateProblem::validate() const {
  if (mesh == nullptr) throw std::invalid_argument("PlateProblem: no mesh");
  material.validate();
  const int lowest = formulation == Formulation::PRM ? 1 : 3;
  if (p < lowest || p > 15)
    throw std::invalid_argument("PlateProblem: order " + std::to_string(p) + " outside [" + std::to_string(lowest) +
                                ", 15] for " + to_string(formulation));
}

namespace {

Eigen::MatrixXd scaled_identity(int n, double s) { return s * Eigen::MatrixXd::Identity(n, n); }

std::function<Eigen::VectorXd(const Vec2&)> scalar_load(const std::function<double(const Vec2&)>& g, double factor) {
  return [g, factor](const Vec2& x) {
    Eigen::VectorXd v(1);
    v[0] = g ? factor * g(x) : 0.0;
    return v;
  };
}

std::set<int> natural_markers(const Mesh& mesh, const std::set<int>& essential) {
  std::set<int> out;
  for (int i = 0; i < mesh.num_edges(); ++i)
    if (mesh.is_boundary_edge(i) && essential.count(mesh.edge_marker(i)) == 0) out.insert(mesh.edge_marker(i));
  return out;
}

void add_block(Eigen::VectorXd& rhs, int offset, const Eigen::VectorXd& b, double sign) {
  rhs.segment(offset, b.size()) += sign * b;
}

/// Group id (element) of a system dof, or -1 when it stays global.
using GroupFn = std::function<int(int)>;

struct SolveOutcome {
  Eigen::VectorXd x;
  int global = 0;
  double residual = 0.0;
};

SolveOutcome solve_constrained(const SparseSystem& sys, const Constraints& constraints, const GroupFn& group, bool condense) {
  const ReducedSystem red = reduce(sys, constraints);
  SolveOutcome out;
  Eigen::VectorXd xr;
  if (condense) {
    std::vector<int> groups(red.free.size());
    for (std::size_t i = 0; i < red.free.size(); ++i) groups[i] = group(red.free[i]);
    const StaticCondensation sc(red.matrix, red.rhs, groups);
    const FactoredSystem f(sc.matrix());
    const Eigen::VectorXd xk = f.solve(sc.rhs());
    xr = sc.recover(xk);
    out.global = f.size();
  } else {
    const FactoredSystem f(red.matrix);
    xr = f.solve(red.rhs);
    out.global = f.size();
  }
  const double b = red.rhs.norm();
  const double r = (red.matrix * xr - red.rhs).norm();
  out.residual = b > 0.0 ? r / b : r;
  out.x = expand(red, xr);
  return out;
}

Eigen::VectorXd segment(const SparseSystem& sys, const Eigen::VectorXd& x, int field) {
  return x.segment(sys.offsets[field], sys.offsets[field + 1] - sys.offsets[field]);
}

void fix_lagrange_boundary(Constraints& c, const FeSpace& space, int offset, const std::function<Eigen::VectorXd(const Vec2&)>& data) {
  if (data)
    add_lagrange_dirichlet(c, space, offset, data);
  else
    c.fix_all(space.boundary_dofs(), offset, 0.0);
}

}  // namespace

SolutionFields solve_prm(const PlateProblem& pr) {
  pr.validate();
  if (pr.formulation != Formulation::PRM) throw std::invalid_argument("solve_prm: problem is not PRM");
  const Mesh& mesh = *pr.mesh;
  const Material& mat = pr.material;
  const double t3 = mat.t * mat.t * mat.t;
  const double kmt = mat.ks * mat.mu() * mat.t;
  auto w = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::Lagrange, pr.p, 1});
  auto phi = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::Lagrange, pr.p, 2});

  const std::vector<BlockTerm> terms = {
      {1, 1, Operator::SymGrad, Operator::SymGrad, t3 * stiffness_tensor(mat).matrix(), false},
      {1, 1, Operator::Value, Operator::Value, scaled_identity(2, kmt), false},
      {0, 0, Operator::Grad, Operator::Grad, scaled_identity(2, kmt), false},
      {0, 1, Operator::Grad, Operator::Value, scaled_identity(2, -kmt), true},
  };
  const std::vector<LoadTerm> loads = {{0, Operator::Value, scalar_load(pr.load, t3)}};
  SparseSystem sys = assemble_system({w.get(), phi.get()}, {"w", "phi"}, terms, loads,
                                     assembly_degree(pr.p, mesh.geo_order()));

  Constraints c;
  std::function<Eigen::VectorXd(const Vec2&)> wdata, phidata;
  if (pr.deflection) wdata = scalar_load(pr.deflection, 1.0);
  if (pr.rotation) phidata = [f = pr.rotation](const Vec2& x) { return Eigen::VectorXd(f(x)); };
  fix_lagrange_boundary(c, *w, sys.offsets[0], wdata);
  fix_lagrange_boundary(c, *phi, sys.offsets[1], phidata);

  const GroupFn group = [&](int d) {
    const int f = d < sys.offsets[1] ? 0 : 1;
    const FeSpace& s = f == 0 ? *w : *phi;
    const int local = d - sys.offsets[f];
    return s.element_local(local) ? s.owner_index(local) : -1;
  };
  const SolveOutcome out = solve_constrained(sys, c, group, pr.condense);

  SolutionFields sol;
  sol.formulation = Formulation::PRM;
  sol.p = pr.p;
  sol.material = mat;
  sol.mesh = &mesh;
  sol.w_space = w;
  sol.phi_space = phi;
  sol.w = segment(sys, out.x, 0);
  sol.phi = segment(sys, out.x, 1);
  sol.num_dofs = sys.size();
  sol.num_global_dofs = out.global;
  sol.residual = out.residual;
  if (pr.keep_system) sol.system = std::move(sys);
  return sol;
}

SolutionFields solve_tfsrm(const PlateProblem& pr) {
  pr.validate();
  if (pr.formulation != Formulation::TFSRM) throw std::invalid_argument("solve_tfsrm: problem is not TFSRM");
  const Mesh& mesh = *pr.mesh;
  const Material& mat = pr.material;
  const double c = mat.shear_factor();
  auto hz = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::HZ, pr.p, 1});
  auto phi = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::DG, pr.p - 1, 2});
  auto w = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::Lagrange, pr.p, 1});

  const std::vector<BlockTerm> terms = {
      {0, 0, Operator::Value, Operator::Value, compliance_tensor(mat).matrix(), false},
      {0, 1, Operator::Div, Operator::Value, scaled_identity(2, 1.0), true},
      {2, 2, Operator::Grad, Operator::Grad, scaled_identity(2, -c), false},
      {2, 1, Operator::Grad, Operator::Value, scaled_identity(2, c), true},
      {1, 1, Operator::Value, Operator::Value, scaled_identity(2, -c), false},
  };
  const std::vector<LoadTerm> loads = {{2, Operator::Value, scalar_load(pr.load, -1.0)}};
  SparseSystem sys = assemble_system({hz.get(), phi.get(), w.get()}, {"M", "phi", "w"}, terms, loads,
                                     assembly_degree(pr.p, mesh.geo_order()));
  if (pr.rotation) add_block(sys.rhs, sys.offsets[0], rotation_neumann(*hz, pr.rotation, natural_markers(mesh, pr.moment_markers)), 1.0);

  Constraints cons;
  std::function<Eigen::VectorXd(const Vec2&)> wdata;
  if (pr.deflection) wdata = scalar_load(pr.deflection, 1.0);
  fix_lagrange_boundary(cons, *w, sys.offsets[2], wdata);
  if (!pr.moment_markers.empty()) {
    if (!pr.moment) throw std::invalid_argument("solve_tfsrm: moment markers given without moment data");
    add_hz_dirichlet(cons, *hz, sys.offsets[0], pr.moment, pr.moment_markers);
  }

  const GroupFn group = [&](int d) {
    if (d < sys.offsets[1]) return hz->element_local(d) ? hz->owner_index(d) : -1;
    if (d < sys.offsets[2]) return phi->owner_index(d - sys.offsets[1]);
    return -1;
  };
  const SolveOutcome out = solve_constrained(sys, cons, group, pr.condense);

  SolutionFields sol;
  sol.formulation = Formulation::TFSRM;
  sol.p = pr.p;
  sol.material = mat;
  sol.mesh = &mesh;
  sol.m_space = hz;
  sol.phi_space = phi;
  sol.w_space = w;
  sol.m = segment(sys, out.x, 0);
  sol.phi = segment(sys, out.x, 1);
  sol.w = segment(sys, out.x, 2);
  sol.num_dofs = sys.size();
  sol.num_global_dofs = out.global;
  sol.residual = out.residual;
  if (pr.keep_system) sol.system = std::move(sys);
  return sol;
}

SolutionFields solve_qfsrm(const PlateProblem& pr) {
  pr.validate();
  if (pr.formulation != Formulation::QFSRM) throw std::invalid_argument("solve_qfsrm: problem is not QFSRM");
  const Mesh& mesh = *pr.mesh;
  const Material& mat = pr.material;
  const double c = mat.shear_factor();
  auto hz = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::HZ, pr.p, 1});
  auto phi = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::DG, pr.p - 1, 2});
  auto w = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::DG, pr.p - 1, 1});
  auto rt = std::make_shared<FeSpace>(mesh, SpaceDesc{SpaceKind::RT, pr.p - 1, 1});

  const std::vector<BlockTerm> terms = {
      {0, 0, Operator::Value, Operator::Value, compliance_tensor(mat).matrix(), false},
      {0, 1, Operator::Div, Operator::Value, scaled_identity(2, 1.0), true},
      {3, 3, Operator::Value, Operator::Value, scaled_identity(2, 1.0 / c), false},
      {3, 2, Operator::Div, Operator::Value, scaled_identity(1, -1.0), true},
      {3, 1, Operator::Value, Operator::Value, scaled_identity(2, -1.0), true},
  };
  const std::vector<LoadTerm> loads = {{2, Operator::Value, scalar_load(pr.load, -1.0)}};
  SparseSystem sys = assemble_system({hz.get(), phi.get(), w.get(), rt.get()}, {"M", "phi", "w", "q"}, terms, loads,
                                     assembly_degree(pr.p, mesh.geo_order()));
  if (pr.rotation) add_block(sys.rhs, sys.offsets[0], rotation_neumann(*hz, pr.rotation, natural_markers(mesh, pr.moment_markers)), 1.0);
  if (pr.deflection) add_block(sys.rhs, sys.offsets[3], deflection_neumann(*rt, pr.deflection), -1.0);

  Constraints cons;
  if (!pr.moment_markers.empty()) {
    if (!pr.moment) throw std::invalid_argument("solve_qfsrm: moment markers given without moment data");
    add_hz_dirichlet(cons, *hz, sys.offsets[0], pr.moment, pr.moment_markers);
  }

  const GroupFn group = [&](int d) {
    if (d < sys.offsets[1]) return hz->element_local(d) ? hz->owner_index(d) : -1;
    return -1;
  };
  const SolveOutcome out = solve_constrained(sys, cons, group, pr.condense);

  SolutionFields sol;
  sol.formulation = Formulation::QFSRM;
  sol.p = pr.p;
  sol.material = mat;
  sol.mesh = &mesh;
  sol.m_space = hz;
  sol.phi_space = phi;
  sol.w_space = w;
  sol.q_space = rt;
  sol.m = segment(sys, out.x, 0);
  sol.phi = segment(sys, out.x, 1);
  sol.w = segment(sys, out.x, 2);
  sol.q = segment(sys, out.x, 3);
  sol.num_dofs = sys.size();
  sol.num_global_dofs = out.global;
  sol.residual = out.residual;
  if (pr.keep_system) sol.system = std::move(sys);
  return sol;
}

SolutionFields solve(const PlateProblem& problem) {
  switch (problem.formulation) {
    case Formulation::PRM: return solve_prm(problem);
    case Formulation::TFSRM: return solve_tfsrm(problem);
    case Formulation::QFSRM: return solve_qfsrm(problem);
  }
  throw std::invalid_argument("solve: unknown formulation");
}

namespace {

Eigen::VectorXd gather(const FeSpace& s, const Eigen::VectorXd& coeffs, int e) {
  const auto dofs = s.element_dofs(e);
  Eigen::VectorXd out(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) out[static_cast<Eigen::Index>(i)] = coeffs[dofs[i]];
  return out;
}

struct LocalEval {
  double w = 0.0;
  Vec2 grad_w = Vec2::Zero();
  Vec2 phi = Vec2::Zero();
  Mat2 grad_phi = Mat2::Zero();
};

LocalEval eval_primal(const SolutionFields& f, int e, const Vec2& xi, const GeometryPoint& g) {
  LocalEval le;
  BasisEval ev;
  f.w_space->evaluate(e, xi, g, ev);
  const Eigen::VectorXd cw = gather(*f.w_space, f.w, e);
  le.w = (ev.value * cw)(0);
  if (ev.grad.size() > 0) le.grad_w = ev.grad * cw;
  f.phi_space->evaluate(e, xi, g, ev);
  const Eigen::VectorXd cp = gather(*f.phi_space, f.phi, e);
  le.phi = ev.value * cp;
  const Eigen::Vector4d gp = ev.grad * cp;
  le.grad_phi << gp[0], gp[1], gp[2], gp[3];
  return le;
}

}  // namespace

FieldValues evaluate_fields(const SolutionFields& f, int e, const Vec2& xi) {
  if (f.mesh == nullptr || !f.w_space || !f.phi_space) throw std::invalid_argument("evaluate_fields: empty solution");
  const GeometryPoint g = f.mesh->geometry(e, xi);
  const LocalEval le = eval_primal(f, e, xi, g);
  FieldValues out;
  out.w = le.w;
  out.phi = le.phi;
  BasisEval ev;
  if (f.m_space) {
    f.m_space->evaluate(e, xi, g, ev);
    out.m = SymMatrix2::from_coords(ev.value * gather(*f.m_space, f.m, e));
  } else {
    out.m = apply_stiffness(f.material, SymMatrix2::sym(le.grad_phi));
  }
  if (f.q_space) {
    f.q_space->evaluate(e, xi, g, ev);
    out.q = ev.value * gather(*f.q_space, f.q, e);
  } else {
    out.q = -f.material.shear_factor() * (le.grad_w - le.phi);
  }
  return out;
}

Vec2 postprocess_shear(const SolutionFields& f, int e, const Vec2& xi) {
  if (f.formulation == Formulation::QFSRM) throw std::invalid_argument("postprocess_shear: QFSRM carries the shear field");
  const GeometryPoint g = f.mesh->geometry(e, xi);
  const LocalEval le = eval_primal(f, e, xi, g);
  return -f.material.shear_factor() * (le.grad_w - le.phi);
}

std::optional<std::pair<int, Vec2>> locate(const Mesh& mesh, const Vec2& x) {
  constexpr double kTol = 1e-10;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& tri = mesh.triangle(e);
    const Vec2& a = mesh.vertex(tri[0]);
    const Vec2& b = mesh.vertex(tri[1]);
    const Vec2& c = mesh.vertex(tri[2]);
    const double hmax = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
    const Vec2 lo = a.cwiseMin(b).cwiseMin(c).array() - (mesh.is_curved(e) ? 0.5 * hmax : kTol);
    const Vec2 hi = a.cwiseMax(b).cwiseMax(c).array() + (mesh.is_curved(e) ? 0.5 * hmax : kTol);
    if ((x.array() < lo.array()).any() || (x.array() > hi.array()).any()) continue;
    Mat2 j;
    j.col(0) = c - a;
    j.col(1) = b - a;
    Vec2 xi = j.inverse() * (x - a);
    if (mesh.is_curved(e)) {
      for (int it = 0; it < 30; ++it) {
        const Vec2 clamped(std::clamp(xi[0], -0.5, 1.5), std::clamp(xi[1], -0.5, 1.5));
        GeometryPoint g;
        try {
          g = mesh.geometry(e, clamped);
        } catch (const std::domain_error&) {
          break;
        }
        const Vec2 step = g.Jinv * (x - g.x);
        xi = clamped + step;
        if (step.norm() < 1e-14) break;
      }
    }
    if (xi[0] >= -kTol && xi[1] >= -kTol && xi[0] + xi[1] <= 1.0 + kTol) {
      if (mesh.is_curved(e) && (mesh.geometry(e, xi).x - x).norm() > 1e-9) continue;
      return std::make_pair(e, xi);
    }
  }
  return std::nullopt;
}

std::vector<FieldValues> probe(const SolutionFields& fields, const std::vector<Vec2>& points) {
  std::vector<FieldValues> out;
  out.reserve(points.size());
  for (const Vec2& x : points) {
    const auto hit = locate(*fields.mesh, x);
    if (!hit) throw std::out_of_range("probe: point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) + ") is outside the mesh");
    out.push_back(evaluate_fields(fields, hit->first, hit->second));
  }
  return out;
}

double error_l2(const Mesh& mesh, int degree,
                const std::function<Eigen::VectorXd(int, const Vec2&, const GeometryPoint&)>& discrete,
                const std::function<Eigen::VectorXd(const Vec2&)>& exact) {
  const QuadratureRule& rule = triangle_quadrature(std::min(degree, kMaxQuadratureDegree));
  double err = 0.0, norm = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const GeometryPoint g = mesh.geometry(e, rule.points[q]);
      const double w = rule.weights[q] * g.det;
      const Eigen::VectorXd u = exact(g.x);
      const Eigen::VectorXd uh = discrete(e, rule.points[q], g);
      err += w * (u - uh).squaredNorm();
      norm += w * u.squaredNorm();
    }
  if (!(norm > 0.0)) throw std::domain_error("error_l2: exact solution has zero norm");
  return std::sqrt(err / norm);
}

FieldErrors compute_errors(const SolutionFields& f, const AnalyticSolution& exact) {
  const Mesh& mesh = *f.mesh;
  const int degree = 2 * f.p + 4 + 2 * (mesh.geo_order() - 1);
  const QuadratureRule& rule = triangle_quadrature(std::min(degree, kMaxQuadratureDegree));
  std::array<double, 4> err{}, norm{};
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& xi = rule.points[q];
      const GeometryPoint g = mesh.geometry(e, xi);
      const double w = rule.weights[q] * g.det;
      const FieldValues v = evaluate_fields(f, e, xi);
      const double we = exact.deflection(g.x);
      const Vec2 pe = exact.rotation(g.x);
      const SymMatrix2 me = exact.moment(g.x);
      const Vec2 qe = exact.shear(g.x);
      err[0] += w * (we - v.w) * (we - v.w);
      norm[0] += w * we * we;
      err[1] += w * (pe - v.phi).squaredNorm();
      norm[1] += w * pe.squaredNorm();
      err[2] += w * (me.coords() - v.m.coords()).squaredNorm();
      norm[2] += w * me.coords().squaredNorm();
      err[3] += w * (qe - v.q).squaredNorm();
      norm[3] += w * qe.squaredNorm();
    }
  for (double n : norm)
    if (!(n > 0.0)) throw std::domain_error("compute_errors: exact field with zero norm");
  return {std::sqrt(err[0] / norm[0]), std::sqrt(err[1] / norm[1]), std::sqrt(err[2] / norm[2]),
          std::sqrt(err[3] / norm[3])};
}

}  // namespace hzplate
