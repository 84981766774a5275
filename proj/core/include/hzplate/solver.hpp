#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "hzplate/assembly.hpp"

namespace hzplate {

/// Sparse LU factorization (COLAMD ordering, partial pivoting) of a square system after
/// symmetric row-norm equilibration.
/// Reusable for several right-hand sides; distinct instances are independent.
class FactoredSystem {
 public:
  /// Throws std::invalid_argument for non-square input and std::runtime_error when the
  /// factorization fails (the message carries the offending column).
  explicit FactoredSystem(const SparseMatrix& matrix);
  ~FactoredSystem();
  FactoredSystem(FactoredSystem&&) noexcept;
  FactoredSystem& operator=(FactoredSystem&&) noexcept;

  [[nodiscard]] int size() const { return n_; }
  /// Solves K x = b with one step of iterative refinement when the relative residual
  /// exceeds 1e-12. Throws std::invalid_argument on a size mismatch.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// ‖K x - b‖ / ‖b‖ (0 when b = 0 and x = 0).
  [[nodiscard]] double relative_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// One-shot factor and solve.
Eigen::VectorXd solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs);

/// Least-squares slope of log(error) against log(h) over the last min(last, n) points.
/// Throws std::invalid_argument for fewer than two points or non-positive values.
double fit_slope(const std::vector<std::pair<double, double>>& points, int last = 3);

}  // namespace hzplate
