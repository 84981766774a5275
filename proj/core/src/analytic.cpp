#include "hzplate/analytic.hpp"

#include <array>

#include "hzplate/jet.hpp"

namespace hzplate {

namespace {

struct JetFields {
  Jet w;
  std::array<Jet, 2> phi;
};

SymMatrix2 moment_from(const Material& mat, const std::array<Jet, 2>& phi) {
  Mat2 grad;
  grad << phi[0].d[0], phi[0].d[1], phi[1].d[0], phi[1].d[1];
  return apply_stiffness(mat, SymMatrix2::sym(grad));
}

Jet f0(const Jet& a) { return (a - 1.0) * a; }
Jet f1(const Jet& a) { return 5.0 * a * a - 5.0 * a + 1.0; }
Jet f2(const Jet& a) { return 2.0 * a - 1.0; }
Jet cube(const Jet& a) { return a * a * a; }

Jet square_h(const Vec2& p) {
  const Jet x = Jet::variable(p[0], 0);
  const Jet y = Jet::variable(p[1], 1);
  return cube(f0(y)) * f0(x) * f1(x) + cube(f0(x)) * f0(y) * f1(y);
}

JetFields square_fields(const Material& mat, const Vec2& p) {
  const Jet x = Jet::variable(p[0], 0);
  const Jet y = Jet::variable(p[1], 1);
  const double c = mat.t * mat.t / (3.0 * mat.ks * (1.0 - mat.nu));
  JetFields f;
  f.w = 100.0 * (cube(f0(x)) * cube(f0(y)) / 3.0 - c * square_h(p));
  f.phi[0] = 100.0 * cube(f0(y)) * f0(x) * f0(x) * f2(x);
  f.phi[1] = 100.0 * cube(f0(x)) * f0(y) * f0(y) * f2(y);
  return f;
}

JetFields disk_fields(const Material& mat, const Vec2& p) {
  const Jet x = Jet::variable(p[0], 0);
  const Jet y = Jet::variable(p[1], 1);
  const Jet s = 1.0 - x * x - y * y;
  const double t3 = mat.t * mat.t * mat.t;
  const double a = 12.0 * (mat.nu * mat.nu - 1.0) / (64.0 * mat.E * t3);
  const double b = 1.0 / (4.0 * mat.ks * mat.mu() * mat.t);
  JetFields f;
  f.w = a * s * s - b * s;
  f.phi[0] = -4.0 * a * s * x;
  f.phi[1] = -4.0 * a * s * y;
  return f;
}

}  // namespace

AnalyticSolution analytic_square(const Material& mat) {
  mat.validate();
  const double qc = 100.0 * mat.mu() / (3.0 * (1.0 - mat.nu));
  AnalyticSolution s;
  s.deflection = [mat](const Vec2& x) { return square_fields(mat, x).w.v; };
  s.rotation = [mat](const Vec2& x) {
    const auto f = square_fields(mat, x);
    return Vec2(f.phi[0].v, f.phi[1].v);
  };
  s.moment = [mat](const Vec2& x) { return moment_from(mat, square_fields(mat, x).phi); };
  s.shear = [qc](const Vec2& x) {
    const Jet h = square_h(x);
    return Vec2(qc * h.d[0], qc * h.d[1]);
  };
  s.load = [qc](const Vec2& x) {
    const Jet h = square_h(x);
    return qc * (h.h[0] + h.h[2]);
  };
  return s;
}

AnalyticSolution analytic_disk(const Material& mat) {
  mat.validate();
  const double t3 = mat.t * mat.t * mat.t;
  AnalyticSolution s;
  s.deflection = [mat](const Vec2& x) { return disk_fields(mat, x).w.v; };
  s.rotation = [mat](const Vec2& x) {
    const auto f = disk_fields(mat, x);
    return Vec2(f.phi[0].v, f.phi[1].v);
  };
  s.moment = [mat](const Vec2& x) { return moment_from(mat, disk_fields(mat, x).phi); };
  s.shear = [t3](const Vec2& x) { return Vec2(-x[0] / (2.0 * t3), -x[1] / (2.0 * t3)); };
  s.load = [t3](const Vec2&) { return -1.0 / t3; };
  return s;
}

}  // namespace hzplate
