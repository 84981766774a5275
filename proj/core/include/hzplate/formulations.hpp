#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hzplate/analytic.hpp"
#include "hzplate/assembly.hpp"
#include "hzplate/fe_space.hpp"

namespace hzplate {

enum class Formulation { PRM, TFSRM, QFSRM };

std::string to_string(Formulation f);
/// Parses "prm", "tfsrm" or "qfsrm"; throws std::invalid_argument otherwise.
Formulation parse_formulation(const std::string& name);

/// Plate problem on a mesh in the thickness-scaled convention (see AnalyticSolution).
///
/// Boundary data defaults to the clamped plate (w̃ = 0, φ̃ = 0). PRM imposes w̃ and φ̃
/// strongly on the whole boundary. TFSRM imposes w̃ strongly, M̃n strongly on the segments
/// in `moment_markers` and φ̃ weakly elsewhere. QFSRM imposes w̃ weakly through the shear
/// field and M̃n as TFSRM.
struct PlateProblem {
  Formulation formulation = Formulation::TFSRM;
  int p = 3;
  Material material;
  const Mesh* mesh = nullptr;
  std::function<double(const Vec2&)> load;        // g; empty means zero
  std::function<double(const Vec2&)> deflection;  // w̃; empty means zero
  std::function<Vec2(const Vec2&)> rotation;      // φ̃; empty means zero
  std::function<SymMatrix2(const Vec2&)> moment;  // M̃ on moment_markers
  std::set<int> moment_markers;
  bool condense = true;     // eliminate element-local dofs before the global solve
  bool keep_system = false; // store the assembled system in the solution

  /// Throws std::invalid_argument for a missing mesh, an invalid material or an order
  /// outside the formulation's range (PRM: p >= 1, mixed: p >= 3).
  void validate() const;
};

/// Discrete fields of a solved problem. Spaces not used by the formulation are null.
///  PRM:   w ∈ U^p, φ ∈ [U^p]²
///  TFSRM: w ∈ U^p, φ ∈ [DG^{p-1}]², M ∈ HZ^p
///  QFSRM: w ∈ DG^{p-1}, φ ∈ [DG^{p-1}]², M ∈ HZ^p, q ∈ RT^{p-1}
struct SolutionFields {
  Formulation formulation = Formulation::TFSRM;
  int p = 3;
  Material material;
  const Mesh* mesh = nullptr;
  std::shared_ptr<const FeSpace> w_space, phi_space, m_space, q_space;
  Eigen::VectorXd w, phi, m, q;
  int num_dofs = 0;         // all unknowns before boundary elimination
  int num_global_dofs = 0;  // unknowns of the factorized system
  double residual = 0.0;    // relative residual of the global solve
  std::optional<SparseSystem> system;
};

/// Field values at one point. M and q are post-processed for formulations that do not
/// carry them (M = 𝔻* sym Dφ, q = -(k_sμ/t²)(∇w - φ)).
struct FieldValues {
  double w = 0.0;
  Vec2 phi = Vec2::Zero();
  SymMatrix2 m;
  Vec2 q = Vec2::Zero();
};

SolutionFields solve_prm(const PlateProblem& problem);
SolutionFields solve_tfsrm(const PlateProblem& problem);
SolutionFields solve_qfsrm(const PlateProblem& problem);
/// Dispatches on problem.formulation.
SolutionFields solve(const PlateProblem& problem);

/// Evaluates all fields on element e at reference point xi.
FieldValues evaluate_fields(const SolutionFields& fields, int e, const Vec2& xi);
/// Post-processed shear -(k_sμ/t²)(∇w - φ) of a PRM or TFSRM solution.
Vec2 postprocess_shear(const SolutionFields& fields, int e, const Vec2& xi);

/// Element containing the physical point and its reference coordinates (Newton iteration
/// on curved elements); empty when the point lies outside the mesh.
std::optional<std::pair<int, Vec2>> locate(const Mesh& mesh, const Vec2& x);
/// Field values at physical points; throws std::out_of_range for points outside the mesh.
std::vector<FieldValues> probe(const SolutionFields& fields, const std::vector<Vec2>& points);

/// Relative L² errors ‖u - u_h‖ / ‖u‖ per field.
struct FieldErrors {
  double w = 0.0;
  double phi = 0.0;
  double m = 0.0;
  double q = 0.0;
};

/// Relative L² errors against an analytic solution with a rule of degree
/// 2p + 4 + 2(geo_order - 1). Throws std::domain_error when an exact norm vanishes.
FieldErrors compute_errors(const SolutionFields& fields, const AnalyticSolution& exact);

/// Relative L² error of one component-vector field; `discrete` and `exact` return values
/// of equal length. Throws std::domain_error when the exact norm vanishes.
double error_l2(const Mesh& mesh, int degree,
                const std::function<Eigen::VectorXd(int, const Vec2&, const GeometryPoint&)>& discrete,
                const std::function<Eigen::VectorXd(const Vec2&)>& exact);

}  // namespace hzplate
