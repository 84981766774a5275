#pragma once

#include <vector>

#include "hzplate/formulations.hpp"

namespace hzplate {

/// Recovery-based estimate ‖Π M_h - M_h‖ / ‖Π M_h‖, where Π averages the element limits of
/// M_h at the equispaced nodes of the continuous degree-p Lagrange space and interpolates.
struct RecoveryEstimate {
  double estimate = 0.0;
  /// Per-element ∫_e |Π M_h - M_h|² / ‖Π M_h‖²; sums to estimate².
  std::vector<double> contributions;
};

/// Throws std::domain_error when the recovered field vanishes identically.
RecoveryEstimate recovery_estimate(const SolutionFields& fields);

/// Smallest prefix of elements, sorted by decreasing contribution (ties by index), whose
/// sum reaches theta times the total. Returned sorted by element index. Throws
/// std::invalid_argument for theta outside (0, 1] or negative contributions.
std::vector<int> dorfler_mark(const std::vector<double>& contributions, double theta);

}  // namespace hzplate
