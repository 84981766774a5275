#pragma once

#include <functional>

#include "hzplate/tensor.hpp"

namespace hzplate {

/// Closed-form plate solution in the thickness-scaled convention:
///   M = 𝔻* sym Dφ,  q = -(k_s μ / t²)(∇w - φ),  Div M = q,  div q = g.
/// The unscaled physical load per unit area is t³ g.
struct AnalyticSolution {
  std::function<double(const Vec2&)> deflection;
  std::function<Vec2(const Vec2&)> rotation;
  std::function<SymMatrix2(const Vec2&)> moment;
  std::function<Vec2(const Vec2&)> shear;
  std::function<double(const Vec2&)> load;
};

/// Clamped unit-square solution built from f0(a) = (a-1)a, f1(a) = 5a²-5a+1, f2(a) = 2a-1:
///   w = 100 [ f0(x)³f0(y)³/3 - t²/(3k_s(1-ν)) h ],  h = f0(y)³f0(x)f1(x) + f0(x)³f0(y)f1(y),
///   φ = 100 (f0(y)³f0(x)²f2(x), f0(x)³f0(y)²f2(y)).
/// For k_s = 5/6 the deflection coefficient is 2t²/(5(1-ν)). Shear and load use the
/// closed forms q = 100μ/(3(1-ν)) ∇h and g = div q, which avoid the cancellation in
/// ∇w - φ for thin plates.
AnalyticSolution analytic_square(const Material& mat);

/// Clamped unit disk under the physical load -1 (g = -1/t³):
///   w = 12(ν²-1)/(64Et³)(1-r²)² - (1-r²)/(4k_sμt),  φ = -12(ν²-1)/(16Et³)(1-r²)(x, y).
AnalyticSolution analytic_disk(const Material& mat);

}  // namespace hzplate
