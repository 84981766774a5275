#include "hzplate/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace hzplate {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

SymMatrix2 SymMatrix2::sym(const Mat2& a) { return {a(0, 0), 0.5 * (a(0, 1) + a(1, 0)), a(1, 1)}; }

SymMatrix2 SymMatrix2::dyad(const Vec2& u, const Vec2& v) {
  return {u[0] * v[0], 0.5 * (u[0] * v[1] + u[1] * v[0]), u[1] * v[1]};
}

Mat2 SymMatrix2::matrix() const {
  Mat2 m;
  m << m11, m12, m12, m22;
  return m;
}

Eigen::Vector3d SymMatrix2::coords() const { return {m11, kSqrt2 * m12, m22}; }

SymMatrix2 SymMatrix2::from_coords(const Eigen::Vector3d& c) { return {c[0], c[1] / kSqrt2, c[2]}; }

SymMatrix2& SymMatrix2::operator+=(const SymMatrix2& o) {
  m11 += o.m11;
  m12 += o.m12;
  m22 += o.m22;
  return *this;
}

SymMatrix2& SymMatrix2::operator-=(const SymMatrix2& o) {
  m11 -= o.m11;
  m12 -= o.m12;
  m22 -= o.m22;
  return *this;
}

SymMatrix2& SymMatrix2::operator*=(double s) {
  m11 *= s;
  m12 *= s;
  m22 *= s;
  return *this;
}

SymMatrix2 operator+(SymMatrix2 a, const SymMatrix2& b) { return a += b; }
SymMatrix2 operator-(SymMatrix2 a, const SymMatrix2& b) { return a -= b; }
SymMatrix2 operator*(double s, SymMatrix2 a) { return a *= s; }
SymMatrix2 operator*(SymMatrix2 a, double s) { return a *= s; }

double inner(const SymMatrix2& a, const SymMatrix2& b) { return a.m11 * b.m11 + 2.0 * a.m12 * b.m12 + a.m22 * b.m22; }

double frobenius_norm(const SymMatrix2& a) { return std::sqrt(inner(a, a)); }

Tensor4 Tensor4::outer(const SymMatrix2& a, const SymMatrix2& b) {
  return Tensor4(a.coords() * b.coords().transpose());
}

Tensor4 Tensor4::from_components(const std::function<double(int, int, int, int)>& a) {
  // Unit inputs in orthonormal coordinates, expressed as index matrices.
  const double inv = 1.0 / kSqrt2;
  const std::array<Mat2, 3> basis = {
      (Mat2() << 1.0, 0.0, 0.0, 0.0).finished(),
      (Mat2() << 0.0, inv, inv, 0.0).finished(),
      (Mat2() << 0.0, 0.0, 0.0, 1.0).finished(),
  };
  Eigen::Matrix3d m;
  for (int col = 0; col < 3; ++col) {
    Mat2 out = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) out(i, j) += a(i, j, k, l) * basis[col](k, l);
    m.col(col) = SymMatrix2::sym(out).coords();
  }
  return Tensor4(m);
}

SymMatrix2 double_contract(const Tensor4& t, const SymMatrix2& s) { return t(s); }

Material::Material(double e, double poisson, double shear_correction, double thickness)
    : E(e), nu(poisson), ks(shear_correction), t(thickness) {
  validate();
}

void Material::validate() const {
  if (!(E > 0.0)) throw std::invalid_argument("Material: Young's modulus must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("Material: Poisson ratio must lie in [0, 0.5)");
  if (!(ks > 0.0)) throw std::invalid_argument("Material: shear correction factor must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("Material: thickness must be positive");
}

SymMatrix2 apply_stiffness(const Material& mat, const SymMatrix2& eps) {
  const double c = mat.E / (12.0 * (1.0 - mat.nu * mat.nu));
  SymMatrix2 out = (1.0 - mat.nu) * eps;
  out.m11 += mat.nu * eps.trace();
  out.m22 += mat.nu * eps.trace();
  return c * out;
}

SymMatrix2 apply_compliance(const Material& mat, const SymMatrix2& m) {
  SymMatrix2 out = (1.0 + mat.nu) * m;
  out.m11 -= mat.nu * m.trace();
  out.m22 -= mat.nu * m.trace();
  return (12.0 / mat.E) * out;
}

namespace {
Tensor4 isotropic(double a_identity, double a_trace) {
  // a_identity 𝕁 + a_trace 1⊗1; in orthonormal coordinates 1 = (1, 0, 1).
  const Eigen::Vector3d one(1.0, 0.0, 1.0);
  return Tensor4(a_identity * Eigen::Matrix3d::Identity() + a_trace * one * one.transpose());
}
}  // namespace

Tensor4 stiffness_tensor(const Material& mat) {
  const double c = mat.E / (12.0 * (1.0 - mat.nu * mat.nu));
  return isotropic(c * (1.0 - mat.nu), c * mat.nu);
}

Tensor4 compliance_tensor(const Material& mat) {
  const double c = 12.0 / mat.E;
  return isotropic(c * (1.0 + mat.nu), -c * mat.nu);
}

Tensor4 edge_transformation(const Vec2& t, const Vec2& n, const Vec2& tau, const Vec2& nu) {
  const double tau2 = tau.squaredNorm();
  if (tau2 == 0.0) throw std::invalid_argument("edge_transformation: degenerate reference edge (zero tangent)");
  const double scale = 1.0 / (tau2 * tau2);
  Tensor4 out = Tensor4::outer(SymMatrix2::dyad(t, t), SymMatrix2::dyad(tau, tau));
  out += Tensor4::outer(SymMatrix2::dyad(t, n), SymMatrix2::dyad(tau, nu));
  out += Tensor4::outer(SymMatrix2::dyad(n, n), SymMatrix2::dyad(nu, nu));
  return scale * out;
}

}  // namespace hzplate
