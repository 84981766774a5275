#include "hzplate/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hzplate {

GaussRule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  GaussRule1D r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.points[i] = -x;
    r.points[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.points[n / 2] = 0.0;
  return r;
}

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("quadrature: degree " + std::to_string(degree) + " outside [0, " +
                                std::to_string(kMaxQuadratureDegree) + "]");
}

QuadratureRule build_triangle(int degree) {
  // ξ = u, η = v (1 - u) on [0,1]^2 with Jacobian (1 - u): degree + 1 in u, degree in v.
  const int n = (degree + 3) / 2;
  const GaussRule1D g = gauss_legendre(n);
  QuadratureRule r;
  r.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.points[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.points[j] + 1.0);
      r.points.emplace_back(u, v * (1.0 - u));
      r.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return r;
}

template <class Rule, class Builder>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& m, int key, Builder build) {
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Rule>(build(key))).first;
  return *it->second;
}

}  // namespace

const QuadratureRule& triangle_quadrature(int degree) {
  check_degree(degree);
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex m;
  return cached(cache, m, degree, build_triangle);
}

const GaussRule1D& line_quadrature(int degree) {
  check_degree(degree);
  static std::map<int, std::unique_ptr<GaussRule1D>> cache;
  static std::mutex m;
  return cached(cache, m, degree, [](int d) { return gauss_legendre(d / 2 + 1); });
}

}  // namespace hzplate
