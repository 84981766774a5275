#pragma once

#include <array>

namespace hzplate {

/// Second-order forward-mode jet in two variables: value, gradient and Hessian
/// (stored as xx, xy, yy). Closed under the ring operations, which is all the
/// polynomial kernels need.
struct Jet {
  double v = 0.0;
  std::array<double, 2> d{0.0, 0.0};
  std::array<double, 3> h{0.0, 0.0, 0.0};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit promotion of constants is intended
  Jet(double value, double dx, double dy) : v(value), d{dx, dy} {}

  static Jet variable(double value, int which) { return which == 0 ? Jet(value, 1.0, 0.0) : Jet(value, 0.0, 1.0); }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d[0] += o.d[0];
    d[1] += o.d[1];
    h[0] += o.h[0];
    h[1] += o.h[1];
    h[2] += o.h[2];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    d[0] -= o.d[0];
    d[1] -= o.d[1];
    h[0] -= o.h[0];
    h[1] -= o.h[1];
    h[2] -= o.h[2];
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    d[0] *= s;
    d[1] *= s;
    h[0] *= s;
    h[1] *= s;
    h[2] *= s;
    return *this;
  }
  Jet& operator/=(double s) { return *this *= (1.0 / s); }
  Jet& operator*=(const Jet& o) {
    Jet r;
    r.v = v * o.v;
    r.d[0] = v * o.d[0] + d[0] * o.v;
    r.d[1] = v * o.d[1] + d[1] * o.v;
    r.h[0] = v * o.h[0] + h[0] * o.v + 2.0 * d[0] * o.d[0];
    r.h[1] = v * o.h[1] + h[1] * o.v + d[0] * o.d[1] + d[1] * o.d[0];
    r.h[2] = v * o.h[2] + h[2] * o.v + 2.0 * d[1] * o.d[1];
    return *this = r;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator+(Jet a, double b) { return a += Jet(b); }
inline Jet operator+(double a, Jet b) { return b += Jet(a); }
inline Jet operator-(Jet a, double b) { return a -= Jet(b); }
inline Jet operator-(double a, const Jet& b) { return Jet(a) - b; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator/(Jet a, double s) { return a /= s; }
inline Jet operator-(Jet a) { return a *= -1.0; }

/// Value accessor shared by double and Jet so templated kernels can branch on it.
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace hzplate
