#include <gtest/gtest.h>

#include <cmath>

#include "hzplate/quadrature.hpp"

using namespace hzplate;

namespace {
double factorial(int n) { return std::tgamma(n + 1.0); }
}  // namespace

TEST(GaussLegendre, IntegratesMonomialsExactly) {
  for (int n = 1; n <= 12; ++n) {
    const GaussRule1D rule = gauss_legendre(n);
    ASSERT_EQ(rule.points.size(), static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += rule.weights[q] * std::pow(rule.points[q], k);
      EXPECT_NEAR(s, k % 2 == 0 ? 2.0 / (k + 1) : 0.0, 1e-14) << "n = " << n << ", k = " << k;
    }
  }
}

TEST(TriangleQuadrature, IntegratesMonomialsExactly) {
  // ∫_T ξ^a η^b = a! b! / (a + b + 2)!
  for (int deg : {1, 4, 7, 12, 20}) {
    const QuadratureRule& rule = triangle_quadrature(deg);
    EXPECT_GE(rule.degree, deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q][0], a) * std::pow(rule.points[q][1], b);
        EXPECT_NEAR(s, factorial(a) * factorial(b) / factorial(a + b + 2), 1e-14) << deg << ":" << a << "," << b;
      }
  }
}

TEST(TriangleQuadrature, PointsInsideAndWeightsPositive) {
  const QuadratureRule& rule = triangle_quadrature(15);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    EXPECT_GT(rule.weights[q], 0.0);
    EXPECT_GT(rule.points[q][0], 0.0);
    EXPECT_GT(rule.points[q][1], 0.0);
    EXPECT_LT(rule.points[q][0] + rule.points[q][1], 1.0);
  }
}

TEST(Quadrature, RejectsDegreesOutOfRange) {
  EXPECT_THROW(triangle_quadrature(-1), std::invalid_argument);
  EXPECT_THROW(triangle_quadrature(kMaxQuadratureDegree + 1), std::invalid_argument);
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(Quadrature, CachedRulesAreStable) {
  EXPECT_EQ(&triangle_quadrature(9), &triangle_quadrature(9));
  EXPECT_EQ(&line_quadrature(9), &line_quadrature(9));
}
