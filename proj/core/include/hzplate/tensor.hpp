#pragma once

#include <Eigen/Dense>

#include <functional>

namespace hzplate {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Symmetric 2x2 tensor stored by its three independent entries.
struct SymMatrix2 {
  double m11 = 0.0;
  double m12 = 0.0;
  double m22 = 0.0;

  static SymMatrix2 identity() { return {1.0, 0.0, 1.0}; }
  /// Symmetric part of an arbitrary 2x2 matrix.
  static SymMatrix2 sym(const Mat2& a);
  /// sym(u ⊗ v)
  static SymMatrix2 dyad(const Vec2& u, const Vec2& v);

  [[nodiscard]] double trace() const { return m11 + m22; }
  [[nodiscard]] Mat2 matrix() const;
  [[nodiscard]] Vec2 operator*(const Vec2& v) const { return {m11 * v[0] + m12 * v[1], m12 * v[0] + m22 * v[1]}; }

  /// Coordinates in the orthonormal frame (e1⊗e1, √2 sym(e1⊗e2), e2⊗e2).
  [[nodiscard]] Eigen::Vector3d coords() const;
  static SymMatrix2 from_coords(const Eigen::Vector3d& c);

  SymMatrix2& operator+=(const SymMatrix2& o);
  SymMatrix2& operator-=(const SymMatrix2& o);
  SymMatrix2& operator*=(double s);
};

SymMatrix2 operator+(SymMatrix2 a, const SymMatrix2& b);
SymMatrix2 operator-(SymMatrix2 a, const SymMatrix2& b);
SymMatrix2 operator*(double s, SymMatrix2 a);
SymMatrix2 operator*(SymMatrix2 a, double s);

/// Frobenius product ⟨A, B⟩ = A_ij B_ij.
double inner(const SymMatrix2& a, const SymMatrix2& b);
double frobenius_norm(const SymMatrix2& a);

/// Fourth-order tensor restricted to Sym(2) -> Sym(2), stored as a 3x3 matrix acting
/// on orthonormal Sym(2) coordinates. Frobenius products are preserved, so symmetry and
/// definiteness of the tensor are plain matrix properties.
class Tensor4 {
 public:
  Tensor4() : m_(Eigen::Matrix3d::Zero()) {}
  explicit Tensor4(const Eigen::Matrix3d& m) : m_(m) {}

  static Tensor4 identity() { return Tensor4(Eigen::Matrix3d::Identity()); }
  /// (A ⊗ B) : S = ⟨B, S⟩ A
  static Tensor4 outer(const SymMatrix2& a, const SymMatrix2& b);
  /// Builds the tensor from index components A_ijkl. Only the minor-symmetric part
  /// acting on Sym(2) is retained.
  static Tensor4 from_components(const std::function<double(int, int, int, int)>& a);

  [[nodiscard]] const Eigen::Matrix3d& matrix() const { return m_; }
  [[nodiscard]] SymMatrix2 operator()(const SymMatrix2& s) const { return SymMatrix2::from_coords(m_ * s.coords()); }

  Tensor4& operator+=(const Tensor4& o) {
    m_ += o.m_;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator*(double s, const Tensor4& a) { return Tensor4(s * a.m_); }

 private:
  Eigen::Matrix3d m_;
};

/// Double contraction 𝔸S = A_ijkl S_kl e_i ⊗ e_j.
SymMatrix2 double_contract(const Tensor4& t, const SymMatrix2& s);

/// Isotropic plate material. Throws std::invalid_argument when the parameters are outside
/// E > 0, 0 <= nu < 0.5, ks > 0, t > 0.
struct Material {
  double E = 1.0;
  double nu = 0.3;
  double ks = 5.0 / 6.0;
  double t = 0.1;

  Material() = default;
  Material(double e, double poisson, double shear_correction, double thickness);

  void validate() const;
  /// Shear modulus E / (2(1 + nu)).
  [[nodiscard]] double mu() const { return E / (2.0 * (1.0 + nu)); }
  /// k_s mu / t^2, the penalty-like shear factor of the thickness-scaled system.
  [[nodiscard]] double shear_factor() const { return ks * mu() / (t * t); }
};

/// 𝔻* eps = (1/12) E/(1-nu^2) [nu tr(eps) I + (1-nu) eps]
SymMatrix2 apply_stiffness(const Material& mat, const SymMatrix2& eps);
/// 𝔸 M = (12/E) [(1+nu) M - nu tr(M) I]
SymMatrix2 apply_compliance(const Material& mat, const SymMatrix2& m);
Tensor4 stiffness_tensor(const Material& mat);
Tensor4 compliance_tensor(const Material& mat);

/// Edge transformation
///   𝕋 = |τ|^-4 (t⊗t⊗τ⊗τ + sym(t⊗n)⊗sym(τ⊗ν) + n⊗n⊗ν⊗ν)
/// mapping reference edge dyads onto the physical ones. Throws std::invalid_argument
/// for a zero reference tangent.
Tensor4 edge_transformation(const Vec2& t, const Vec2& n, const Vec2& tau, const Vec2& nu);

/// Counter-clockwise rotation by ninety degrees.
inline Vec2 rotate_ccw(const Vec2& v) { return {-v[1], v[0]}; }

/// Cofactor matrix det(J) J^-T; linear in J for 2x2 matrices.
inline Mat2 cofactor(const Mat2& j) {
  Mat2 c;
  c << j(1, 1), -j(1, 0), -j(0, 1), j(0, 0);
  return c;
}

}  // namespace hzplate
