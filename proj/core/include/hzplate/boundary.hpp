#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "hzplate/assembly.hpp"

namespace hzplate {

/// Essential constraints on a SparseSystem, indexed in system numbering.
///
/// A transform replaces three dofs x (coefficients of the Cartesian vertex tensors) by
/// rotated coefficients x' with x = T x'; fixed values refer to the transformed dofs.
struct Constraints {
  struct Transform {
    std::array<int, 3> dofs;
    Eigen::Matrix3d T;
  };
  std::map<int, double> fixed;
  std::vector<Transform> transforms;

  void fix(int dof, double value) { fixed[dof] = value; }
  /// Fixes `dofs` shifted by `offset` to a common value.
  void fix_all(const std::vector<int>& dofs, int offset, double value = 0.0);
};

/// System with constrained dofs eliminated symmetrically.
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free;          // reduced index -> system index
  std::vector<int> reduced_index; // system index -> reduced index or -1
  SparseMatrix transform;         // P with x = P x'
  Eigen::VectorXd fixed_values;   // transformed coordinates, zero at free dofs
};

/// K' = Pᵀ K P, b' = Pᵀ b, then eliminates fixed dofs: K_ff x_f = b'_f - K'_fc x_c.
ReducedSystem reduce(const SparseSystem& system, const Constraints& constraints);
/// Maps a reduced solution back to the full system numbering.
Eigen::VectorXd expand(const ReducedSystem& reduced, const Eigen::VectorXd& x);

/// Invokes f at every quadrature point of the boundary edges whose marker is in `markers`
/// (all boundary edges when empty). Arguments: element, local edge, reference point,
/// geometry, outward unit normal, arc-length weight.
void for_each_boundary_point(const Mesh& mesh, const std::set<int>& markers, int degree,
                             const std::function<void(int, int, const Vec2&, const GeometryPoint&, const Vec2&, double)>& f);

/// Rotated vertex frame at a boundary vertex: d2 is the normalised average of the unit
/// outward normals of the adjacent constrained edges, d1 = Rᵀ d2. Throws std::domain_error
/// when the two normals are antiparallel.
std::pair<Vec2, Vec2> boundary_vertex_frame(const Mesh& mesh, int vertex, const std::set<int>& markers);

/// Essential moment data M̃ n on the boundary for an HZ field located at `offset`:
/// vertex dofs get rotated frames with the normal-coupling coefficients fixed from
/// point values (the tangent-tangent coefficient stays free); edge normal-coupling dofs
/// come from a per-edge L² projection with the vertex interpolant moved to the right side.
void add_hz_dirichlet(Constraints& constraints, const FeSpace& hz, int offset,
                      const std::function<SymMatrix2(const Vec2&)>& moment, const std::set<int>& markers = {});

/// Essential data for a hierarchical Lagrange field (scalar or vector) at `offset`: vertex
/// dofs take point values, edge dofs a per-edge L² projection of the data minus the
/// vertex interpolant.
void add_lagrange_dirichlet(Constraints& constraints, const FeSpace& space, int offset,
                            const std::function<Eigen::VectorXd(const Vec2&)>& value, const std::set<int>& markers = {});

/// b_k = ∫ ⟨ρ_k n, φ̃⟩ ds for an HZ space (natural rotation data).
Eigen::VectorXd rotation_neumann(const FeSpace& hz, const std::function<Vec2(const Vec2&)>& rotation,
                                 const std::set<int>& markers = {});

/// b_k = ∫ ⟨ρ_k, n⟩ w̃ ds for an RT space (natural deflection data).
Eigen::VectorXd deflection_neumann(const FeSpace& rt, const std::function<double(const Vec2&)>& deflection,
                                   const std::set<int>& markers = {});

}  // namespace hzplate
