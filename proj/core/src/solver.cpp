#include "hzplate/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SparseLU>

namespace hzplate {

struct FactoredSystem::Impl {
  SparseMatrix matrix;
  Eigen::VectorXd scale;  // symmetric equilibration S with S K S factorized
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;

  [[nodiscard]] Eigen::VectorXd apply_inverse(const Eigen::VectorXd& b) const {
    const Eigen::VectorXd z = lu.solve(scale.cwiseProduct(b));
    return scale.cwiseProduct(z);
  }
};

FactoredSystem::FactoredSystem(const SparseMatrix& matrix) : impl_(std::make_unique<Impl>()) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("factor: matrix is not square");
  n_ = static_cast<int>(matrix.rows());
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  if (n_ == 0) return;
  Eigen::VectorXd rowmax = Eigen::VectorXd::Zero(n_);
  for (int k = 0; k < impl_->matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(impl_->matrix, k); it; ++it)
      rowmax[it.row()] = std::max(rowmax[it.row()], std::abs(it.value()));
  impl_->scale.resize(n_);
  for (int i = 0; i < n_; ++i) {
    if (rowmax[i] == 0.0) throw std::runtime_error("factor: singular matrix, row " + std::to_string(i) + " is empty");
    impl_->scale[i] = 1.0 / std::sqrt(rowmax[i]);
  }
  const SparseMatrix scaled = impl_->scale.asDiagonal() * impl_->matrix * impl_->scale.asDiagonal();
  impl_->lu.analyzePattern(scaled);
  impl_->lu.factorize(scaled);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("factor: singular matrix of size " + std::to_string(n_) + ": " + impl_->lu.lastErrorMessage());
}

FactoredSystem::~FactoredSystem() = default;
FactoredSystem::FactoredSystem(FactoredSystem&&) noexcept = default;
FactoredSystem& FactoredSystem::operator=(FactoredSystem&&) noexcept = default;

double FactoredSystem::relative_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) const {
  const double r = (impl_->matrix * x - rhs).norm();
  const double b = rhs.norm();
  return b > 0.0 ? r / b : r;
}

Eigen::VectorXd FactoredSystem::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("solve: right-hand side has size " + std::to_string(rhs.size()) +
                                                    ", system has " + std::to_string(n_));
  if (n_ == 0) return {};
  Eigen::VectorXd x = impl_->apply_inverse(rhs);
  if (relative_residual(x, rhs) > 1e-12) {
    const Eigen::VectorXd r = rhs - impl_->matrix * x;
    x += impl_->apply_inverse(r);
  }
  if (!x.allFinite()) throw std::runtime_error("solve: non-finite solution");
  return x;
}

Eigen::VectorXd solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs) {
  return FactoredSystem(matrix).solve(rhs);
}

double fit_slope(const std::vector<std::pair<double, double>>& points, int last) {
  if (points.size() < 2) throw std::invalid_argument("fit_slope: at least two points required");
  if (last < 2) throw std::invalid_argument("fit_slope: window must hold at least two points");
  const std::size_t n = std::min(points.size(), static_cast<std::size_t>(last));
  const std::size_t first = points.size() - n;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = first; i < points.size(); ++i) {
    const auto [h, e] = points[i];
    if (!(h > 0.0) || !(e > 0.0)) throw std::invalid_argument("fit_slope: values must be positive");
    sx += std::log(h);
    sy += std::log(e);
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < points.size(); ++i) {
    const double dx = std::log(points[i].first) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(points[i].second) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: abscissae coincide");
  return sxy / sxx;
}

}  // namespace hzplate
