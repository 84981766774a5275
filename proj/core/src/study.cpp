#include "hzplate/study.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "hzplate/recovery.hpp"
#include "hzplate/solver.hpp"

namespace hzplate {

std::string to_string(Domain d) {
  switch (d) {
    case Domain::Square: return "square";
    case Domain::Disk: return "disk";
    case Domain::LShape: return "lshape";
  }
  return "unknown";
}

Domain parse_domain(const std::string& name) {
  if (name == "square") return Domain::Square;
  if (name == "disk") return Domain::Disk;
  if (name == "lshape") return Domain::LShape;
  throw std::invalid_argument("unknown domain '" + name + "' (expected square, disk or lshape)");
}

void StudyConfig::validate() const {
  material.validate();
  if (formulation != Formulation::PRM && p < 3) throw std::invalid_argument("mixed formulations need p >= 3");
  if (p < 1 || p > 15) throw std::invalid_argument("p must lie in [1, 15]");
  if (refinements < 1 || refinements > 12) throw std::invalid_argument("refinements must lie in [1, 12]");
  if (geo_order != 1 && geo_order != 3) throw std::invalid_argument("geo-order must be 1 or 3");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (max_dofs < 1) throw std::invalid_argument("max-dofs must be positive");
  if (max_steps < 1) throw std::invalid_argument("max-steps must be positive");
  if (adaptive && formulation == Formulation::PRM) throw std::invalid_argument("adaptive studies need a mixed formulation");
}

StudyConfig default_config(Domain domain) {
  StudyConfig c;
  c.domain = domain;
  c.material = Material(1.0, 0.3, 5.0 / 6.0, 0.1);
  if (domain != Domain::Square) c.material.E = 240.0;
  if (domain == Domain::Disk) c.refinements = 3;
  if (domain == Domain::LShape) {
    c.adaptive = true;
    c.refinements = 4;
  }
  return c;
}

std::vector<Mesh> study_meshes(const StudyConfig& config) {
  std::vector<Mesh> out;
  switch (config.domain) {
    case Domain::Square:
      for (int i = 0; i < config.refinements; ++i) out.push_back(square_mesh(2 * i + 1));
      break;
    case Domain::Disk:
      out.push_back(disk_mesh(24, config.geo_order));
      for (int i = 1; i < config.refinements; ++i) out.push_back(refine_uniform(out.back()));
      break;
    case Domain::LShape:
      out.push_back(lshape_mesh());
      for (int i = 1; i < config.refinements; ++i) out.push_back(refine_uniform(out.back()));
      break;
  }
  return out;
}

namespace {

bool has_analytic(Domain d) { return d != Domain::LShape; }

AnalyticSolution analytic_for(const StudyConfig& c) {
  return c.domain == Domain::Square ? analytic_square(c.material) : analytic_disk(c.material);
}

bool has_moment(Formulation f) { return f != Formulation::PRM; }

ConvergenceRecord measure(const StudyConfig& config, const Mesh& mesh, int step, std::vector<double>* contributions) {
  const auto start = std::chrono::steady_clock::now();
  const PlateProblem problem = study_problem(config, mesh);
  const SolutionFields fields = solve(problem);
  ConvergenceRecord r;
  r.step = step;
  r.elements = mesh.num_elements();
  r.dofs = fields.num_dofs;
  r.h = mesh.max_edge_length();
  if (has_analytic(config.domain)) {
    const FieldErrors e = compute_errors(fields, analytic_for(config));
    r.err_w = e.w;
    r.err_phi = e.phi;
    r.err_m = e.m;
    r.err_q = e.q;
  }
  if (has_moment(config.formulation) || contributions != nullptr) {
    RecoveryEstimate est = recovery_estimate(fields);
    r.estimator = est.estimate;
    if (contributions != nullptr) *contributions = std::move(est.contributions);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

PlateProblem study_problem(const StudyConfig& config, const Mesh& mesh) {
  PlateProblem p;
  p.formulation = config.formulation;
  p.p = config.p;
  p.material = config.material;
  p.mesh = &mesh;
  p.condense = config.condense;
  if (has_analytic(config.domain)) {
    p.load = analytic_for(config).load;
  } else {
    const double g = config.load;
    p.load = [g](const Vec2&) { return g; };
  }
  return p;
}

int count_dofs(const Mesh& mesh, Formulation formulation, int p) {
  switch (formulation) {
    case Formulation::PRM: return 3 * FeSpace(mesh, {SpaceKind::Lagrange, p, 1}).num_dofs();
    case Formulation::TFSRM:
      return FeSpace(mesh, {SpaceKind::HZ, p, 1}).num_dofs() + FeSpace(mesh, {SpaceKind::DG, p - 1, 2}).num_dofs() +
             FeSpace(mesh, {SpaceKind::Lagrange, p, 1}).num_dofs();
    case Formulation::QFSRM:
      return FeSpace(mesh, {SpaceKind::HZ, p, 1}).num_dofs() + FeSpace(mesh, {SpaceKind::DG, p - 1, 3}).num_dofs() +
             FeSpace(mesh, {SpaceKind::RT, p - 1, 1}).num_dofs();
  }
  throw std::invalid_argument("count_dofs: unknown formulation");
}

StudyResult run_convergence(const StudyConfig& config) {
  config.validate();
  StudyResult out;
  std::vector<Mesh> meshes = study_meshes(config);
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const bool last = i + 1 == meshes.size();
    try {
      out.records.push_back(measure(config, meshes[i], static_cast<int>(i), last && has_moment(config.formulation)
                                                                                   ? &out.final_contributions
                                                                                   : nullptr));
    } catch (const std::exception& ex) {
      throw std::runtime_error("mesh " + std::to_string(i) + " (" + std::to_string(meshes[i].num_elements()) +
                               " elements): " + ex.what());
    }
  }
  out.final_mesh = std::move(meshes.back());
  return out;
}

StudyResult run_adaptive(const StudyConfig& config) {
  config.validate();
  StudyResult out;
  Mesh mesh;
  switch (config.domain) {
    case Domain::Square: mesh = square_mesh(3); break;
    case Domain::Disk: mesh = disk_mesh(24, config.geo_order); break;
    case Domain::LShape: mesh = refine_uniform(lshape_mesh()); break;
  }
  if (count_dofs(mesh, config.formulation, config.p) > config.max_dofs)
    throw std::invalid_argument("max-dofs is below the size of the initial mesh");
  for (int step = 0; step < config.max_steps; ++step) {
    std::vector<double> contributions;
    try {
      out.records.push_back(measure(config, mesh, step, &contributions));
    } catch (const std::exception& ex) {
      throw std::runtime_error("adaptive step " + std::to_string(step) + " (" + std::to_string(mesh.num_elements()) +
                               " elements): " + ex.what());
    }
    out.final_contributions = contributions;
    const std::size_t n = out.records.size();
    if (n >= 4 && out.records[n - 1].estimator > 0.99 * out.records[n - 4].estimator) break;
    Mesh next = refine(mesh, dorfler_mark(contributions, config.theta));
    if (count_dofs(next, config.formulation, config.p) > config.max_dofs) break;
    mesh = std::move(next);
  }
  out.final_mesh = std::move(mesh);
  return out;
}

StudyResult run_study(const StudyConfig& config) { return config.adaptive ? run_adaptive(config) : run_convergence(config); }

StudySlopes study_slopes(const std::vector<ConvergenceRecord>& records, std::size_t upto, int last) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto slope = [&](auto x_of, auto y_of) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < upto && i < records.size(); ++i) {
      const double x = x_of(records[i]);
      const double y = y_of(records[i]);
      if (std::isfinite(y) && y > 0.0 && x > 0.0) pts.emplace_back(x, y);
    }
    if (pts.size() < 2) return nan;
    try {
      return fit_slope(pts, last);
    } catch (const std::invalid_argument&) {
      return nan;
    }
  };
  auto h = [](const ConvergenceRecord& r) { return r.h; };
  auto dofs = [](const ConvergenceRecord& r) { return static_cast<double>(r.dofs); };
  return {slope(h, [](const ConvergenceRecord& r) { return r.err_w; }),
          slope(h, [](const ConvergenceRecord& r) { return r.err_phi; }),
          slope(h, [](const ConvergenceRecord& r) { return r.err_m; }),
          slope(h, [](const ConvergenceRecord& r) { return r.err_q; }),
          slope(dofs, [](const ConvergenceRecord& r) { return r.estimator; })};
}

std::vector<int> element_layers(const Mesh& mesh, const Vec2& point, int layers) {
  std::set<int> current;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int v : mesh.triangle(e))
      if ((mesh.vertex(v) - point).norm() < 1e-12) current.insert(e);
  if (current.empty()) {
    const auto hit = locate(mesh, point);
    if (!hit) throw std::invalid_argument("element_layers: point outside the mesh");
    current.insert(hit->first);
  }
  for (int l = 1; l < layers; ++l) {
    std::set<int> verts;
    for (int e : current)
      for (int v : mesh.triangle(e)) verts.insert(v);
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int v : mesh.triangle(e))
        if (verts.count(v) > 0) current.insert(e);
  }
  return {current.begin(), current.end()};
}

}  // namespace hzplate
