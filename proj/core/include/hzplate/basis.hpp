#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "hzplate/mesh.hpp"
#include "hzplate/tensor.hpp"

namespace hzplate {

/// Dof class of a Hu-Zhang basis function.
enum class HzClass { Vertex, EdgeTangentNormal, EdgeNormalNormal, EdgeTangentTangent, Cell };

/// Descriptor of one local Hu-Zhang basis function on the reference triangle.
struct HzFunctionInfo {
  HzClass cls;
  int polytope;       // local vertex (0..2) or local edge (0..2); -1 for the cell
  int degree;         // kernel index a (edge: a; cell: a) or 1 for vertices
  int legendre = 0;   // cell functions only: k in l^k(2ξ-1)
  SymMatrix2 tensor;  // reference template tensor
};

/// Local dimension 3(p+1)(p+2)/2 of HZ^p.
int hz_local_dim(int p);
/// Number of scalar cell kernels, (p-1)(p-2)/2.
int hz_cell_kernel_count(int p);

/// Local basis ordering: 9 vertex functions (3v + c), then per edge 2(p-1) normal-coupling
/// functions (tangent-normal, normal-normal for a = 2..p), then per edge (p-1)
/// tangent-tangent functions, then 3 per cell kernel. Throws for p < 3.
std::vector<HzFunctionInfo> hz_reference_basis(int p);

/// Cell subset of hz_reference_basis.
std::vector<HzFunctionInfo> hz_cell_basis(int p);

/// Edge kernel L_s^a(λ_j - λ_i, λ_i + λ_j) of local edge (i, j), evaluated in the local
/// direction. Throws for a < 2.
double hz_edge_kernel(int a, int edge, const Vec2& xi);

/// Cell kernel λ2 L_s^a(λ3 - λ1, λ1 + λ3) l^k(2ξ - 1).
double hz_cell_kernel(int a, int k, const Vec2& xi);

/// Physical HZ^p basis of element e at reference point xi: values as orthonormal Sym(2)
/// coordinates (3 × dim) and divergences (2 × dim). Edge functions are mapped by the edge
/// transformation built from t = Jτ, n = cof(J)ν; tangent-normal functions carry the sign
/// that makes them conforming; kernels use the global edge direction.
void hz_evaluate(const Mesh& mesh, int e, int p, const Vec2& xi, const GeometryPoint& g, Eigen::MatrixXd& value,
                 Eigen::MatrixXd& div);

/// Raviart-Thomas RT_k: local dimension (k+1)(k+3). Local ordering: (k+1) edge moments per
/// local edge, then k(k+1) interior moments.
int rt_local_dim(int k);

/// Contravariant Piola-mapped RT_k basis of element e (values 2 × dim, divergence 1 × dim).
/// Edge moments are taken against Legendre polynomials of the global edge parameter with
/// respect to a globally oriented normal, so shared edges match.
void rt_evaluate(const Mesh& mesh, int e, int k, const Vec2& xi, const GeometryPoint& g, Eigen::MatrixXd& value,
                 Eigen::MatrixXd& div);

/// Hierarchical scalar basis of degree p: 3 vertex functions, (p-1) per edge, then
/// (p-1)(p-2)/2 cell bubbles. edge_signs orient the edge kernels (all +1 for a purely
/// local basis). Degree 0 gives the constant. Values 1 × dim, reference-free physical
/// gradients 2 × dim.
int scalar_local_dim(int p);
void scalar_evaluate(int p, const std::array<int, 3>& edge_signs, const Vec2& xi, const GeometryPoint& g,
                     Eigen::MatrixXd& value, Eigen::MatrixXd& grad);

}  // namespace hzplate
