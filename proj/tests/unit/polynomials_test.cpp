#include <gtest/gtest.h>

#include <cmath>

#include "hzplate/polynomials.hpp"
#include "hzplate/quadrature.hpp"

using namespace hzplate;

TEST(Legendre, MatchesClosedForms) {
  for (double x : {-1.0, -0.4, 0.0, 0.3, 1.0}) {
    EXPECT_DOUBLE_EQ(legendre(0, x), 1.0);
    EXPECT_DOUBLE_EQ(legendre(1, x), x);
    EXPECT_NEAR(legendre(2, x), 0.5 * (3 * x * x - 1), 1e-15);
    EXPECT_NEAR(legendre(3, x), 0.5 * (5 * x * x * x - 3 * x), 1e-15);
    EXPECT_NEAR(legendre(4, x), (35 * std::pow(x, 4) - 30 * x * x + 3) / 8, 1e-15);
  }
}

TEST(Legendre, OrthogonalUnderGaussQuadrature) {
  const GaussRule1D rule = gauss_legendre(12);
  for (int m = 0; m <= 10; ++m)
    for (int n = 0; n <= 10; ++n) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        s += rule.weights[q] * legendre(m, rule.points[q]) * legendre(n, rule.points[q]);
      EXPECT_NEAR(s, m == n ? 2.0 / (2 * n + 1) : 0.0, 1e-13) << m << "," << n;
    }
}

TEST(IntegratedLegendre, DerivativeIsLegendreAndEndpointsVanish) {
  for (int p = 2; p <= 9; ++p) {
    EXPECT_NEAR(integrated_legendre(p, -1.0), 0.0, 1e-14);
    EXPECT_NEAR(integrated_legendre(p, 1.0), 0.0, 1e-14);
    for (double x : {-0.8, -0.1, 0.45, 0.9}) {
      const double h = 1e-5;
      const double fd = (integrated_legendre(p, x + h) - integrated_legendre(p, x - h)) / (2 * h);
      EXPECT_NEAR(fd, legendre(p - 1, x), 1e-8) << "p = " << p;
    }
  }
}

TEST(ScaledIntegratedLegendre, IsHomogeneousExtension) {
  EXPECT_DOUBLE_EQ(scaled_integrated_legendre(1, 0.3, 2.0), 0.3);
  for (int p = 2; p <= 8; ++p)
    for (double x : {-0.7, 0.2, 0.6})
      for (double t : {0.3, 1.0, 2.5}) {
        EXPECT_NEAR(scaled_integrated_legendre(p, x, t), std::pow(t, p) * integrated_legendre(p, x / t), 1e-13)
            << "p = " << p;
      }
}

TEST(ScaledIntegratedLegendre, VanishesAtPlusMinusTForDegreeTwoAndUp) {
  for (int p = 2; p <= 8; ++p) {
    EXPECT_NEAR(scaled_integrated_legendre(p, 0.4, 0.4), 0.0, 1e-15);
    EXPECT_NEAR(scaled_integrated_legendre(p, -0.4, 0.4), 0.0, 1e-15);
  }
}

TEST(ScaledLegendre, IsHomogeneousExtension) {
  std::vector<double> v;
  for (double t : {0.25, 1.0, 3.0}) {
    scaled_legendre_all(7, 0.4, t, v);
    for (int n = 0; n <= 7; ++n) EXPECT_NEAR(v[n], std::pow(t, n) * legendre(n, 0.4 / t), 1e-12) << n;
  }
}

TEST(Polynomials, RejectDegreesOutOfRange) {
  EXPECT_THROW(legendre(-1, 0.0), std::invalid_argument);
  EXPECT_THROW(legendre(kMaxPolynomialDegree + 1, 0.0), std::invalid_argument);
  EXPECT_THROW(scaled_integrated_legendre(0, 0.0, 1.0), std::invalid_argument);
}

TEST(Barycentric, SumToOne) {
  const auto l = barycentric(0.2, 0.3);
  EXPECT_DOUBLE_EQ(l[0] + l[1] + l[2], 1.0);
  EXPECT_DOUBLE_EQ(l[1], 0.3);
  EXPECT_DOUBLE_EQ(l[2], 0.2);
}
