#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hzplate/basis.hpp"
#include "hzplate/mesh.hpp"

namespace hzplate {

enum class SpaceKind { Lagrange, DG, RT, HZ };

/// Space descriptor. `order` is the polynomial degree (RT: k of RT_k). `ncomp` > 1 builds
/// a vector space of identical scalar components (Lagrange and DG only).
struct SpaceDesc {
  SpaceKind kind = SpaceKind::Lagrange;
  int order = 1;
  int ncomp = 1;
};

std::string to_string(SpaceKind kind);

/// Polytope that owns a global dof.
enum class DofOwner { Vertex, Edge, Element };

/// Local basis of one element evaluated at one point.
///  value: value_dim × n (HZ: orthonormal Sym(2) coordinates; RT: 2; scalar: ncomp)
///  grad:  Lagrange/DG only, (2 ncomp) × n with row 2c + j = ∂u_c/∂x_j
///  div:   HZ (2 × n) and RT (1 × n)
struct BasisEval {
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;
  Eigen::MatrixXd div;
};

/// Finite element space with global numbering (the dof map).
///
/// Global numbering: vertex dofs, then shared edge dofs, then element-local dofs in
/// element order. Vector spaces repeat the scalar numbering per component. HZ shares the
/// 3 Cartesian vertex dofs and the tangent-normal/normal-normal edge dofs; tangent-tangent
/// edge dofs and cell dofs stay element-local. The mesh must outlive the space.
class FeSpace {
 public:
  FeSpace(const Mesh& mesh, SpaceDesc desc);

  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const SpaceDesc& desc() const { return desc_; }
  [[nodiscard]] int num_dofs() const { return ndofs_; }
  [[nodiscard]] int local_dim() const { return nloc_; }
  [[nodiscard]] int value_dim() const;
  [[nodiscard]] std::span<const int> element_dofs(int e) const {
    return {elem_dofs_.data() + static_cast<std::size_t>(e) * nloc_, static_cast<std::size_t>(nloc_)};
  }

  [[nodiscard]] DofOwner owner(int dof) const { return owner_[dof]; }
  /// Owning vertex, edge or element index of a dof.
  [[nodiscard]] int owner_index(int dof) const { return owner_index_[dof]; }
  /// True for dofs that couple to a single element only.
  [[nodiscard]] bool element_local(int dof) const { return owner_[dof] == DofOwner::Element; }
  /// HZ only: class of the basis function behind a global dof.
  [[nodiscard]] HzClass hz_class(int dof) const { return hz_class_[dof]; }
  /// Dofs attached to boundary vertices and boundary edges (Lagrange; for HZ, RT the
  /// shared normal-coupling dofs on the boundary). Sorted.
  [[nodiscard]] std::vector<int> boundary_dofs() const;

  /// Evaluates the local basis of element e at reference point xi.
  void evaluate(int e, const Vec2& xi, const GeometryPoint& g, BasisEval& out) const;

 private:
  const Mesh* mesh_;
  SpaceDesc desc_;
  int nscalar_loc_ = 0;
  int nscalar_glob_ = 0;
  int nloc_ = 0;
  int ndofs_ = 0;
  std::vector<int> elem_dofs_;
  std::vector<DofOwner> owner_;
  std::vector<int> owner_index_;
  std::vector<HzClass> hz_class_;
};

}  // namespace hzplate
