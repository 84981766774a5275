#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hzplate/assembly.hpp"

namespace hzplate {

/// Static condensation of element-local dof groups.
///
/// `group[i]` >= 0 assigns dof i to a condensed group (typically the owning element);
/// -1 keeps it in the global system. Each group must couple only to itself and to kept
/// dofs. The reduced system is K_kk - Σ_g K_kg K_gg⁻¹ K_gk with matching right-hand side.
class StaticCondensation {
 public:
  /// Throws std::invalid_argument for size mismatches or dofs of two groups coupling
  /// directly, std::runtime_error when a local block is singular (reports the group).
  StaticCondensation(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, const std::vector<int>& group);

  [[nodiscard]] const SparseMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const Eigen::VectorXd& rhs() const { return rhs_; }
  /// Kept dofs in the original numbering, in reduced order.
  [[nodiscard]] const std::vector<int>& kept() const { return kept_; }
  [[nodiscard]] int num_condensed() const { return num_condensed_; }

  /// Back-substitutes a reduced solution into the full numbering.
  [[nodiscard]] Eigen::VectorXd recover(const Eigen::VectorXd& reduced) const;

 private:
  struct Group {
    std::vector<int> local;    // original indices of the condensed dofs
    std::vector<int> coupled;  // reduced indices of the kept dofs they touch
    Eigen::MatrixXd x;         // K_gg⁻¹ K_gc
    Eigen::VectorXd y;         // K_gg⁻¹ b_g
  };

  int n_ = 0;
  int num_condensed_ = 0;
  SparseMatrix matrix_;
  Eigen::VectorXd rhs_;
  std::vector<int> kept_;
  std::vector<Group> groups_;
};

}  // namespace hzplate
