#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hzplate/condensation.hpp"
#include "hzplate/solver.hpp"

using namespace hzplate;

namespace {

// Block system: kept dofs 0..nk-1 coupled to groups of `gs` local dofs each; local blocks
// couple only to themselves and to kept dofs. Symmetric indefinite when `indefinite`.
struct BlockProblem {
  SparseMatrix k;
  Eigen::VectorXd b;
  std::vector<int> group;
};

BlockProblem block_problem(int nk, int ngroups, int gs, bool indefinite, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = nk + ngroups * gs;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j <= i; ++j) d(i, j) = d(j, i) = u(rng) + (i == j ? 4.0 * nk : 0.0);
  for (int g = 0; g < ngroups; ++g) {
    const int o = nk + g * gs;
    for (int i = 0; i < gs; ++i) {
      for (int j = 0; j <= i; ++j) d(o + i, o + j) = d(o + j, o + i) = u(rng) + (i == j ? 3.0 * gs : 0.0);
      if (indefinite) d(o + i, o + i) *= (i % 2 == 0 ? -1.0 : 1.0);
      for (int c = 0; c < nk; ++c)
        if ((c + g + i) % 3 == 0) d(o + i, c) = d(c, o + i) = u(rng);
    }
  }
  BlockProblem p;
  p.k = d.sparseView();
  p.b = Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
  p.group.assign(n, -1);
  for (int g = 0; g < ngroups; ++g)
    for (int i = 0; i < gs; ++i) p.group[nk + g * gs + i] = g;
  return p;
}

}  // namespace

TEST(StaticCondensation, MatchesDirectSolve) {
  for (bool indefinite : {false, true}) {
    const BlockProblem p = block_problem(8, 5, 4, indefinite, 3);
    const Eigen::VectorXd direct = Eigen::MatrixXd(p.k).fullPivLu().solve(p.b);
    const StaticCondensation sc(p.k, p.b, p.group);
    EXPECT_EQ(sc.num_condensed(), 20);
    EXPECT_EQ(sc.kept().size(), 8u);
    EXPECT_EQ(sc.matrix().rows(), 8);
    const Eigen::VectorXd x = sc.recover(solve(sc.matrix(), sc.rhs()));
    EXPECT_LE((x - direct).norm() / direct.norm(), 1e-12);
    // The Schur complement of a symmetric matrix is symmetric.
    const SparseMatrix st = sc.matrix().transpose();
    EXPECT_LE((sc.matrix() - st).norm(), 1e-12 * sc.matrix().norm());
  }
}

TEST(StaticCondensation, HandlesBadlyScaledLocalBlocks) {
  // Local blocks mixing entries of order 1 and 1e10 (thin-plate shear factor) are regular.
  BlockProblem p = block_problem(6, 3, 4, true, 4);
  Eigen::MatrixXd d(p.k);
  for (int i = 6; i < d.rows(); i += 2) {
    d.row(i) *= 1e5;
    d.col(i) *= 1e5;
  }
  p.k = d.sparseView();
  const Eigen::VectorXd direct = d.fullPivLu().solve(p.b);
  const StaticCondensation sc(p.k, p.b, p.group);
  const Eigen::VectorXd x = sc.recover(solve(sc.matrix(), sc.rhs()));
  EXPECT_LE((x - direct).norm() / direct.norm(), 1e-9);
}

TEST(StaticCondensation, RejectsCrossGroupCouplingAndSingularBlocks) {
  BlockProblem p = block_problem(4, 2, 3, false, 5);
  Eigen::MatrixXd d(p.k);
  d(4, 7) = d(7, 4) = 0.5;  // group 0 touches group 1
  EXPECT_THROW(StaticCondensation(d.sparseView(), p.b, p.group), std::runtime_error);
  Eigen::MatrixXd s(p.k);
  s.block(4, 4, 3, 3).setZero();
  EXPECT_THROW(StaticCondensation(s.sparseView(), p.b, p.group), std::runtime_error);
  EXPECT_THROW(StaticCondensation(p.k, p.b, std::vector<int>(3, -1)), std::invalid_argument);
}

TEST(StaticCondensation, NoGroupsIsIdentity) {
  const BlockProblem p = block_problem(5, 0, 0, false, 6);
  const StaticCondensation sc(p.k, p.b, p.group);
  EXPECT_EQ(sc.num_condensed(), 0);
  EXPECT_EQ((SparseMatrix(sc.matrix() - p.k)).norm(), 0.0);
}

TEST(FactoredSystem, SolvesIndefiniteSparseSystems) {
  const BlockProblem p = block_problem(10, 6, 3, true, 7);
  const FactoredSystem f(p.k);
  EXPECT_EQ(f.size(), p.k.rows());
  const Eigen::VectorXd x = f.solve(p.b);
  EXPECT_LE(f.relative_residual(x, p.b), 1e-13);
  EXPECT_LE((x - Eigen::MatrixXd(p.k).fullPivLu().solve(p.b)).norm(), 1e-12 * x.norm());
}

TEST(FactoredSystem, EquilibrationHandlesWildRowScaling) {
  // D K D with D spanning sixteen orders of magnitude: the solution scales back exactly.
  const BlockProblem p = block_problem(12, 0, 0, false, 8);
  const int n = static_cast<int>(p.k.rows());
  Eigen::VectorXd dscale(n);
  for (int i = 0; i < n; ++i) dscale[i] = std::pow(10.0, -8.0 + 16.0 * i / (n - 1));
  const SparseMatrix scaled = dscale.asDiagonal() * p.k * dscale.asDiagonal();
  const Eigen::VectorXd y = solve(scaled, dscale.cwiseProduct(p.b));
  const Eigen::VectorXd x = solve(p.k, p.b);
  EXPECT_LE((dscale.cwiseProduct(y) - x).norm() / x.norm(), 1e-10);
}

TEST(FactoredSystem, ReportsSingularAndNonSquareInput) {
  SparseMatrix z(3, 3);
  z.insert(0, 0) = 1.0;
  z.insert(1, 1) = 1.0;
  EXPECT_THROW(FactoredSystem{z}, std::runtime_error);
  SparseMatrix r(2, 3);
  EXPECT_THROW(FactoredSystem{r}, std::invalid_argument);
  SparseMatrix ok(2, 2);
  ok.insert(0, 0) = 2.0;
  ok.insert(1, 1) = 4.0;
  EXPECT_THROW((void)solve(ok, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST(FitSlope, RecoversPowerLaws) {
  std::vector<std::pair<double, double>> pts;
  for (double h : {1.0, 0.5, 0.25, 0.125, 0.0625}) pts.emplace_back(h, 3.0 * std::pow(h, 4.0));
  EXPECT_NEAR(fit_slope(pts), 4.0, 1e-12);
  EXPECT_NEAR(fit_slope(pts, 5), 4.0, 1e-12);
  EXPECT_NEAR(fit_slope(pts, 2), 4.0, 1e-12);
  // Only the last points count.
  pts.front().second = 1e6;
  EXPECT_NEAR(fit_slope(pts, 3), 4.0, 1e-12);
}

TEST(FitSlope, RejectsDegenerateInput) {
  EXPECT_THROW(fit_slope({{1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(fit_slope({{1.0, 1.0}, {0.5, 0.0}}), std::invalid_argument);
  EXPECT_THROW(fit_slope({{1.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
}
