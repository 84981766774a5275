#pragma once

#include <vector>

#include "hzplate/tensor.hpp"

namespace hzplate {

inline constexpr int kMaxQuadratureDegree = 60;

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, exact for degree 2n-1.
GaussRule1D gauss_legendre(int n);

/// Rule on the reference triangle Γ. Weights sum to 1/2.
struct QuadratureRule {
  std::vector<Vec2> points;  // (ξ, η)
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Collapsed (Duffy) Gauss rule exact for polynomials of total degree <= degree.
/// Throws std::invalid_argument for negative degrees or degrees above kMaxQuadratureDegree.
/// Rules are cached; the returned reference stays valid for the program lifetime.
const QuadratureRule& triangle_quadrature(int degree);

/// Gauss rule on [-1, 1] exact for the given degree (cached).
const GaussRule1D& line_quadrature(int degree);

}  // namespace hzplate
