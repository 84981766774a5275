#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "hzplate/fe_space.hpp"

namespace hzplate {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Differential operator applied to a basis before pairing.
///  Value:   value (HZ: 3 orthonormal coordinates)
///  Grad:    scalar gradient (Lagrange/DG, ncomp = 1)
///  Div:     HZ row-wise divergence (2) or RT divergence (1)
///  SymGrad: symmetric gradient of a 2-component field in orthonormal coordinates (3)
enum class Operator { Value, Grad, Div, SymGrad };

/// Operator rows of an evaluated basis.
Eigen::MatrixXd apply_operator(const FeSpace& space, const BasisEval& eval, Operator op);
int operator_dim(const FeSpace& space, Operator op);

/// Bilinear term ∫ (op_test δu)ᵀ W (op_trial u) between fields of a system.
struct BlockTerm {
  int test_field = 0;
  int trial_field = 0;
  Operator test_op = Operator::Value;
  Operator trial_op = Operator::Value;
  Eigen::MatrixXd weight;       // operator_dim(test) × operator_dim(trial)
  bool add_transpose = false;   // also insert the transposed block (symmetric off-diagonal pair)
};

/// Linear term ∫ (op δu)ᵀ f(x).
struct LoadTerm {
  int field = 0;
  Operator op = Operator::Value;
  std::function<Eigen::VectorXd(const Vec2&)> f;
};

/// Assembled block system with its field layout.
struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> offsets;  // field f occupies [offsets[f], offsets[f + 1])
  std::vector<std::string> names;

  [[nodiscard]] int size() const { return static_cast<int>(rhs.size()); }
};

/// Assembles a multi-field system. Element matrices are computed in parallel and inserted
/// in element order, so the result is bitwise reproducible. Throws std::invalid_argument
/// when a weight does not match the operator dimensions.
SparseSystem assemble_system(const std::vector<const FeSpace*>& fields, const std::vector<std::string>& names,
                             const std::vector<BlockTerm>& terms, const std::vector<LoadTerm>& loads,
                             int quadrature_degree);

/// Single block ∫ (op_test δu)ᵀ W (op_trial u) with rows from the test space.
SparseMatrix assemble_block(const FeSpace& test, Operator test_op, const FeSpace& trial, Operator trial_op,
                            const Eigen::MatrixXd& weight, int quadrature_degree);

/// Assembly rule degree 2p + 2 (geo_order - 1).
int assembly_degree(int p, int geo_order);

/// Writes a matrix in Matrix Market coordinate format. Throws std::runtime_error on I/O failure.
void write_matrix_market(const SparseMatrix& m, const std::string& path);
/// Writes a dense vector in Matrix Market array format.
void write_matrix_market(const Eigen::VectorXd& v, const std::string& path);

}  // namespace hzplate
