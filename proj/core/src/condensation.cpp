#include "hzplate/condensation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace hzplate {

StaticCondensation::StaticCondensation(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                                       const std::vector<int>& group) {
  n_ = static_cast<int>(matrix.rows());
  if (matrix.cols() != n_ || rhs.size() != n_ || static_cast<int>(group.size()) != n_)
    throw std::invalid_argument("StaticCondensation: size mismatch");

  std::vector<int> reduced(n_, -1);
  std::map<int, int> group_slot;
  for (int i = 0; i < n_; ++i) {
    if (group[i] < 0) {
      reduced[i] = static_cast<int>(kept_.size());
      kept_.push_back(i);
    } else {
      group_slot.emplace(group[i], 0);
    }
  }
  int slot = 0;
  for (auto& [g, s] : group_slot) s = slot++;
  groups_.resize(group_slot.size());
  std::vector<int> slot_of(n_, -1);
  std::vector<int> pos_in_group(n_, -1);
  for (int i = 0; i < n_; ++i)
    if (group[i] >= 0) {
      const int s = group_slot[group[i]];
      slot_of[i] = s;
      pos_in_group[i] = static_cast<int>(groups_[s].local.size());
      groups_[s].local.push_back(i);
    }
  num_condensed_ = n_ - static_cast<int>(kept_.size());

  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = matrix;
  const int nk = static_cast<int>(kept_.size());
  std::vector<std::vector<Eigen::Triplet<double>>> schur(groups_.size());
  std::vector<std::vector<std::pair<int, double>>> rhs_update(groups_.size());
  std::vector<std::string> errors(groups_.size());

#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < static_cast<int>(groups_.size()); ++s) {
    Group& g = groups_[s];
    const int nl = static_cast<int>(g.local.size());
    std::vector<int> coupled;
    for (int i : g.local) {
      for (SparseMatrix::InnerIterator it(matrix, i); it; ++it)
        if (reduced[it.row()] >= 0) coupled.push_back(reduced[it.row()]);
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, i); it; ++it)
        if (reduced[it.col()] >= 0) coupled.push_back(reduced[it.col()]);
    }
    std::sort(coupled.begin(), coupled.end());
    coupled.erase(std::unique(coupled.begin(), coupled.end()), coupled.end());
    const int nc = static_cast<int>(coupled.size());
    auto cpos = [&](int r) { return static_cast<int>(std::lower_bound(coupled.begin(), coupled.end(), r) - coupled.begin()); };

    Eigen::MatrixXd kgg = Eigen::MatrixXd::Zero(nl, nl);
    Eigen::MatrixXd kcg = Eigen::MatrixXd::Zero(nc, nl);
    Eigen::MatrixXd kgc = Eigen::MatrixXd::Zero(nl, nc);
    Eigen::VectorXd bg(nl);
    for (int a = 0; a < nl; ++a) {
      const int i = g.local[a];
      bg[a] = rhs[i];
      for (SparseMatrix::InnerIterator it(matrix, i); it; ++it) {
        const int r = static_cast<int>(it.row());
        if (reduced[r] >= 0)
          kcg(cpos(reduced[r]), a) = it.value();
        else if (slot_of[r] == s)
          kgg(pos_in_group[r], a) = it.value();
        else
          errors[s] = "dof " + std::to_string(r) + " couples two condensed groups";
      }
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, i); it; ++it)
        if (reduced[it.col()] >= 0) kgc(a, cpos(reduced[it.col()])) = it.value();
    }
    if (!errors[s].empty()) continue;
    // Symmetric diagonal scaling so blocks mixing very different magnitudes stay invertible
    // under the relative rank threshold.
    Eigen::VectorXd scale(nl);
    for (int a = 0; a < nl; ++a) scale[a] = kgg(a, a) != 0.0 ? 1.0 / std::sqrt(std::abs(kgg(a, a))) : 1.0;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(scale.asDiagonal() * kgg * scale.asDiagonal());
    if (!lu.isInvertible()) {
      errors[s] = "singular local block of size " + std::to_string(nl) + " (rank " + std::to_string(lu.rank()) + ")";
      continue;
    }
    g.coupled = std::move(coupled);
    g.x = scale.asDiagonal() * lu.solve(scale.asDiagonal() * kgc);
    g.y = scale.asDiagonal() * lu.solve(scale.asDiagonal() * bg);
    const Eigen::MatrixXd update = kcg * g.x;
    const Eigen::VectorXd bupdate = kcg * g.y;
    for (int c = 0; c < nc; ++c) {
      rhs_update[s].emplace_back(g.coupled[c], bupdate[c]);
      for (int r = 0; r < nc; ++r)
        if (update(r, c) != 0.0) schur[s].emplace_back(g.coupled[r], g.coupled[c], -update(r, c));
    }
  }
  for (std::size_t s = 0; s < groups_.size(); ++s)
    if (!errors[s].empty()) {
      int id = -1;
      for (const auto& [gid, sl] : group_slot)
        if (sl == static_cast<int>(s)) id = gid;
      throw std::runtime_error("StaticCondensation: group " + std::to_string(id) + ": " + errors[s]);
    }

  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < n_; ++c) {
    if (reduced[c] < 0) continue;
    for (SparseMatrix::InnerIterator it(matrix, c); it; ++it)
      if (reduced[it.row()] >= 0) trip.emplace_back(reduced[it.row()], reduced[c], it.value());
  }
  for (const auto& t : schur) trip.insert(trip.end(), t.begin(), t.end());
  matrix_.resize(nk, nk);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  rhs_.resize(nk);
  for (int k = 0; k < nk; ++k) rhs_[k] = rhs[kept_[k]];
  for (const auto& u : rhs_update)
    for (const auto& [k, v] : u) rhs_[k] -= v;
}

Eigen::VectorXd StaticCondensation::recover(const Eigen::VectorXd& reduced) const {
  if (reduced.size() != static_cast<Eigen::Index>(kept_.size()))
    throw std::invalid_argument("StaticCondensation::recover: size mismatch");
  Eigen::VectorXd x(n_);
  for (std::size_t k = 0; k < kept_.size(); ++k) x[kept_[k]] = reduced[static_cast<Eigen::Index>(k)];
  for (const Group& g : groups_) {
    Eigen::VectorXd xc(static_cast<Eigen::Index>(g.coupled.size()));
    for (std::size_t c = 0; c < g.coupled.size(); ++c) xc[static_cast<Eigen::Index>(c)] = reduced[g.coupled[c]];
    const Eigen::VectorXd xl = g.y - g.x * xc;
    for (std::size_t a = 0; a < g.local.size(); ++a) x[g.local[a]] = xl[static_cast<Eigen::Index>(a)];
  }
  return x;
}

}  // namespace hzplate
