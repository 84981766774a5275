#include "hzplate/fe_space.hpp"

#include <stdexcept>

namespace hzplate {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Lagrange: return "lagrange";
    case SpaceKind::DG: return "dg";
    case SpaceKind::RT: return "rt";
    case SpaceKind::HZ: return "hz";
  }
  return "unknown";
}

FeSpace::FeSpace(const Mesh& mesh, SpaceDesc desc) : mesh_(&mesh), desc_(desc) {
  const int nv = mesh.num_vertices();
  const int ned = mesh.num_edges();
  const int nel = mesh.num_elements();
  const int p = desc.order;
  if (desc.ncomp < 1 || desc.ncomp > 3) throw std::invalid_argument("FeSpace: component count must lie in [1, 3]");
  if ((desc.kind == SpaceKind::RT || desc.kind == SpaceKind::HZ) && desc.ncomp != 1)
    throw std::invalid_argument("FeSpace: RT and HZ spaces are not replicated per component");

  // Per-local-function (owner kind, owner local polytope, position) tables built per kind.
  auto add = [&](DofOwner o, int idx, HzClass c = HzClass::Vertex) {
    owner_.push_back(o);
    owner_index_.push_back(idx);
    hz_class_.push_back(c);
  };

  switch (desc.kind) {
    case SpaceKind::Lagrange: {
      if (p < 1) throw std::invalid_argument("FeSpace: Lagrange degree must be at least 1");
      const int nb = (p - 1) * (p - 2) / 2;
      nscalar_loc_ = scalar_local_dim(p);
      nscalar_glob_ = nv + (p - 1) * ned + nb * nel;
      for (int v = 0; v < nv; ++v) add(DofOwner::Vertex, v);
      for (int i = 0; i < ned; ++i)
        for (int a = 2; a <= p; ++a) add(DofOwner::Edge, i);
      for (int e = 0; e < nel; ++e)
        for (int j = 0; j < nb; ++j) add(DofOwner::Element, e);
      std::vector<int> scalar(static_cast<std::size_t>(nel) * nscalar_loc_);
      for (int e = 0; e < nel; ++e) {
        int* d = scalar.data() + static_cast<std::size_t>(e) * nscalar_loc_;
        int l = 0;
        for (int v = 0; v < 3; ++v) d[l++] = mesh.triangle(e)[v];
        for (int le = 0; le < 3; ++le)
          for (int a = 2; a <= p; ++a) d[l++] = nv + mesh.element_edge(e, le) * (p - 1) + (a - 2);
        for (int j = 0; j < nb; ++j) d[l++] = nv + ned * (p - 1) + e * nb + j;
      }
      elem_dofs_ = std::move(scalar);
      break;
    }
    case SpaceKind::DG: {
      if (p < 0) throw std::invalid_argument("FeSpace: DG degree must be non-negative");
      nscalar_loc_ = scalar_local_dim(p);
      nscalar_glob_ = nscalar_loc_ * nel;
      elem_dofs_.resize(static_cast<std::size_t>(nel) * nscalar_loc_);
      for (int e = 0; e < nel; ++e)
        for (int j = 0; j < nscalar_loc_; ++j) {
          elem_dofs_[static_cast<std::size_t>(e) * nscalar_loc_ + j] = e * nscalar_loc_ + j;
          add(DofOwner::Element, e);
        }
      break;
    }
    case SpaceKind::RT: {
      if (p < 0) throw std::invalid_argument("FeSpace: RT order must be non-negative");
      const int ni = p * (p + 1);
      nscalar_loc_ = rt_local_dim(p);
      nscalar_glob_ = ned * (p + 1) + nel * ni;
      for (int i = 0; i < ned; ++i)
        for (int m = 0; m <= p; ++m) add(DofOwner::Edge, i);
      for (int e = 0; e < nel; ++e)
        for (int j = 0; j < ni; ++j) add(DofOwner::Element, e);
      elem_dofs_.resize(static_cast<std::size_t>(nel) * nscalar_loc_);
      for (int e = 0; e < nel; ++e) {
        int* d = elem_dofs_.data() + static_cast<std::size_t>(e) * nscalar_loc_;
        int l = 0;
        for (int le = 0; le < 3; ++le)
          for (int m = 0; m <= p; ++m) d[l++] = mesh.element_edge(e, le) * (p + 1) + m;
        for (int j = 0; j < ni; ++j) d[l++] = ned * (p + 1) + e * ni + j;
      }
      break;
    }
    case SpaceKind::HZ: {
      if (p < 3) throw std::invalid_argument("FeSpace: Hu-Zhang order must be at least 3");
      const auto info = hz_reference_basis(p);
      const int shared_per_edge = 2 * (p - 1);
      const int nlocal = 3 * (p - 1) + 3 * hz_cell_kernel_count(p);
      nscalar_loc_ = hz_local_dim(p);
      nscalar_glob_ = 3 * nv + shared_per_edge * ned + nlocal * nel;
      for (int v = 0; v < nv; ++v)
        for (int c = 0; c < 3; ++c) add(DofOwner::Vertex, v, HzClass::Vertex);
      for (int i = 0; i < ned; ++i)
        for (int a = 2; a <= p; ++a) {
          add(DofOwner::Edge, i, HzClass::EdgeTangentNormal);
          add(DofOwner::Edge, i, HzClass::EdgeNormalNormal);
        }
      for (int e = 0; e < nel; ++e)
        for (int j = 9 + 6 * (p - 1); j < nscalar_loc_; ++j) add(DofOwner::Element, e, info[j].cls);
      elem_dofs_.resize(static_cast<std::size_t>(nel) * nscalar_loc_);
      for (int e = 0; e < nel; ++e) {
        int* d = elem_dofs_.data() + static_cast<std::size_t>(e) * nscalar_loc_;
        int l = 0;
        for (int v = 0; v < 3; ++v)
          for (int c = 0; c < 3; ++c) d[l++] = 3 * mesh.triangle(e)[v] + c;
        for (int le = 0; le < 3; ++le)
          for (int j = 0; j < shared_per_edge; ++j) d[l++] = 3 * nv + mesh.element_edge(e, le) * shared_per_edge + j;
        for (int j = 0; j < nlocal; ++j) d[l++] = 3 * nv + shared_per_edge * ned + e * nlocal + j;
      }
      break;
    }
  }

  nloc_ = nscalar_loc_ * desc.ncomp;
  ndofs_ = nscalar_glob_ * desc.ncomp;
  if (desc.ncomp > 1) {
    std::vector<int> vec(static_cast<std::size_t>(nel) * nloc_);
    for (int e = 0; e < nel; ++e)
      for (int c = 0; c < desc.ncomp; ++c)
        for (int i = 0; i < nscalar_loc_; ++i)
          vec[static_cast<std::size_t>(e) * nloc_ + c * nscalar_loc_ + i] =
              c * nscalar_glob_ + elem_dofs_[static_cast<std::size_t>(e) * nscalar_loc_ + i];
    elem_dofs_ = std::move(vec);
    const auto o = owner_;
    const auto oi = owner_index_;
    const auto hc = hz_class_;
    for (int c = 1; c < desc.ncomp; ++c) {
      owner_.insert(owner_.end(), o.begin(), o.end());
      owner_index_.insert(owner_index_.end(), oi.begin(), oi.end());
      hz_class_.insert(hz_class_.end(), hc.begin(), hc.end());
    }
  }
}

int FeSpace::value_dim() const {
  switch (desc_.kind) {
    case SpaceKind::HZ: return 3;
    case SpaceKind::RT: return 2;
    default: return desc_.ncomp;
  }
}

std::vector<int> FeSpace::boundary_dofs() const {
  std::vector<int> out;
  for (int d = 0; d < ndofs_; ++d) {
    if (owner_[d] == DofOwner::Vertex && mesh_->is_boundary_vertex(owner_index_[d])) out.push_back(d);
    if (owner_[d] == DofOwner::Edge && mesh_->is_boundary_edge(owner_index_[d])) out.push_back(d);
  }
  return out;
}

void FeSpace::evaluate(int e, const Vec2& xi, const GeometryPoint& g, BasisEval& out) const {
  switch (desc_.kind) {
    case SpaceKind::HZ: hz_evaluate(*mesh_, e, desc_.order, xi, g, out.value, out.div); return;
    case SpaceKind::RT: rt_evaluate(*mesh_, e, desc_.order, xi, g, out.value, out.div); return;
    default: break;
  }
  std::array<int, 3> signs = {1, 1, 1};
  if (desc_.kind == SpaceKind::Lagrange)
    for (int le = 0; le < 3; ++le) signs[le] = mesh_->edge_orientation(e, le);
  if (desc_.ncomp == 1) {
    scalar_evaluate(desc_.order, signs, xi, g, out.value, out.grad);
    return;
  }
  thread_local Eigen::MatrixXd sv, sg;
  scalar_evaluate(desc_.order, signs, xi, g, sv, sg);
  const int n = nscalar_loc_;
  out.value.setZero(desc_.ncomp, nloc_);
  out.grad.setZero(2 * desc_.ncomp, nloc_);
  for (int c = 0; c < desc_.ncomp; ++c) {
    out.value.block(c, c * n, 1, n) = sv;
    out.grad.block(2 * c, c * n, 2, n) = sg;
  }
}

}  // namespace hzplate
