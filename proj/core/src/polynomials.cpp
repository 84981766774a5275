#include "hzplate/polynomials.hpp"

namespace hzplate {

double integrated_legendre(int p, double x) {
  if (p < 2) throw std::invalid_argument("integrated_legendre: degree must be at least 2");
  return scaled_integrated_legendre(p, x, 1.0);
}

}  // namespace hzplate
