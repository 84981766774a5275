#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hzplate/formulations.hpp"
#include "hzplate/mesh.hpp"

namespace hzplate {

enum class Domain { Square, Disk, LShape };

std::string to_string(Domain d);
/// Parses "square", "disk" or "lshape"; throws std::invalid_argument otherwise.
Domain parse_domain(const std::string& name);

/// One convergence or adaptivity study.
///  square: meshes with 2^k elements, k = 1, 3, ..., 2 refinements - 1
///  disk:   24-element disk refined uniformly refinements - 1 times
///  lshape: uniform (refinements meshes, starting from six elements) or adaptive
///          (Dörfler marking with theta, starting from 24 elements, until max_dofs)
struct StudyConfig {
  Domain domain = Domain::Square;
  Formulation formulation = Formulation::TFSRM;
  int p = 3;
  Material material;
  int refinements = 5;
  int geo_order = 3;
  bool adaptive = false;
  double theta = 0.5;
  int max_dofs = 20000;
  int max_steps = 40;
  bool condense = true;
  double load = -1000.0;  // constant load for the L-shape

  /// Throws std::invalid_argument for inconsistent settings.
  void validate() const;
};

/// Domain-specific defaults: square E = 1; disk and L-shape E = 240, t = 0.1; L-shape
/// adaptive with TFSRM. ν = 0.3 and k_s = 5/6 throughout.
StudyConfig default_config(Domain domain);

/// One step of a study. Fields not measured are NaN.
struct ConvergenceRecord {
  int step = 0;
  int elements = 0;
  int dofs = 0;
  double h = 0.0;
  double err_w = std::numeric_limits<double>::quiet_NaN();
  double err_phi = std::numeric_limits<double>::quiet_NaN();
  double err_m = std::numeric_limits<double>::quiet_NaN();
  double err_q = std::numeric_limits<double>::quiet_NaN();
  double estimator = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
};

/// Outcome of a study: records plus the last mesh and its per-element estimator.
struct StudyResult {
  std::vector<ConvergenceRecord> records;
  Mesh final_mesh;
  std::vector<double> final_contributions;
};

/// Meshes of a uniform study (see StudyConfig).
std::vector<Mesh> study_meshes(const StudyConfig& config);
/// Plate problem for a study mesh; the mesh must outlive the problem.
PlateProblem study_problem(const StudyConfig& config, const Mesh& mesh);
/// Unknown count of the formulation on a mesh, before boundary elimination.
int count_dofs(const Mesh& mesh, Formulation formulation, int p);

/// Uniform study: solves on each mesh, records errors against the analytic solution
/// (square, disk) and the recovery estimate. Failures are rethrown as
/// std::runtime_error naming the mesh index.
StudyResult run_convergence(const StudyConfig& config);
/// Adaptive loop solve, estimate, mark, refine. Stops before exceeding max_dofs, after
/// max_steps, or when the estimate drops by less than 1% over three steps.
StudyResult run_adaptive(const StudyConfig& config);
/// run_adaptive when config.adaptive, run_convergence otherwise.
StudyResult run_study(const StudyConfig& config);

/// Slopes of the study series: errors against h, the estimator against dofs. Uses the
/// last `last` records; NaN when fewer than two valid points exist.
struct StudySlopes {
  double w, phi, m, q, estimator;
};
StudySlopes study_slopes(const std::vector<ConvergenceRecord>& records, std::size_t upto, int last = 3);

/// Elements within `layers` vertex-neighbour layers of the point: layer 1 is every
/// element containing it (as a vertex or inside), each further layer adds the elements
/// sharing a vertex with the previous ones. Returns the element indices sorted.
std::vector<int> element_layers(const Mesh& mesh, const Vec2& point, int layers);

}  // namespace hzplate
