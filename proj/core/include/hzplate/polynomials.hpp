#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "hzplate/jet.hpp"

namespace hzplate {

inline constexpr int kMaxPolynomialDegree = 32;

/// Barycentric coordinates of the reference triangle: λ1 = 1-ξ-η, λ2 = η, λ3 = ξ.
template <class T>
std::array<T, 3> barycentric(const T& xi, const T& eta) {
  return {1.0 - xi - eta, eta, xi};
}

namespace detail {
inline void check_degree(int p, int lowest, const char* what) {
  if (p < lowest || p > kMaxPolynomialDegree) throw std::invalid_argument(what);
}
}  // namespace detail

/// Legendre polynomials l^0..l^p at x, written to out[0..p].
template <class T>
void legendre_all(int p, const T& x, std::vector<T>& out) {
  detail::check_degree(p, 0, "legendre: degree out of range");
  out.assign(static_cast<std::size_t>(p) + 1, T(0.0));
  out[0] = T(1.0);
  if (p >= 1) out[1] = x;
  for (int n = 2; n <= p; ++n) out[n] = ((2.0 * n - 1.0) * x * out[n - 1] - (n - 1.0) * out[n - 2]) / double(n);
}

/// Classical Legendre polynomial l^p(x).
template <class T>
T legendre(int p, const T& x) {
  std::vector<T> v;
  legendre_all(p, x, v);
  return v[p];
}

/// Scaled integrated Legendre polynomials L_s^1..L_s^p at (x, t), written to out[1..p]
/// (out[0] is unused and set to zero). Homogeneous of degree n in (x, t).
/// Scaled Legendre t^n l^n(x/t) for n = 0..p (polynomial in x and t).
template <class T>
void scaled_legendre_all(int p, const T& x, const T& t, std::vector<T>& out) {
  detail::check_degree(p, 0, "scaled_legendre: degree out of range");
  out.assign(static_cast<std::size_t>(p) + 1, T(1.0));
  if (p >= 1) out[1] = x;
  const T t2 = t * t;
  for (int n = 2; n <= p; ++n) out[n] = ((2.0 * n - 1.0) * x * out[n - 1] - (n - 1.0) * t2 * out[n - 2]) / double(n);
}

template <class T>
void scaled_integrated_legendre_all(int p, const T& x, const T& t, std::vector<T>& out) {
  detail::check_degree(p, 1, "scaled_integrated_legendre: degree out of range");
  out.assign(static_cast<std::size_t>(p) + 1, T(0.0));
  out[1] = x;
  if (p >= 2) out[2] = 0.5 * (x * x - t * t);
  const T t2 = t * t;
  for (int n = 3; n <= p; ++n) out[n] = ((2.0 * n - 3.0) * x * out[n - 1] - (n - 3.0) * t2 * out[n - 2]) / double(n);
}

template <class T>
T scaled_integrated_legendre(int p, const T& x, const T& t) {
  std::vector<T> v;
  scaled_integrated_legendre_all(p, x, t, v);
  return v[p];
}

/// L^p(x) = ∫_{-1}^{x} l^{p-1}, p >= 2.
double integrated_legendre(int p, double x);

}  // namespace hzplate
