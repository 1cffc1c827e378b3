#pragma once

#include <cmath>

#include "nxfem/mesh.hpp"

namespace nxfem {

/// Value, gradient and Hessian of a smooth function of (x1, x2), propagated
/// through arithmetic by the product and chain rules. Used to write the
/// manufactured solutions once and read off their fluxes and Laplacians.
struct Jet {
  double v = 0.0;
  double gx = 0.0, gy = 0.0;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;

  static Jet constant(double c) { return {c}; }
  static Jet x(Point p) { return {p.x, 1.0, 0.0}; }
  static Jet y(Point p) { return {p.y, 0.0, 1.0}; }

  Point gradient() const { return {gx, gy}; }
  double laplacian() const { return hxx + hyy; }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  return {a.v + b.v, a.gx + b.gx, a.gy + b.gy, a.hxx + b.hxx, a.hxy + b.hxy, a.hyy + b.hyy};
}
inline Jet operator-(const Jet& a, const Jet& b) {
  return {a.v - b.v, a.gx - b.gx, a.gy - b.gy, a.hxx - b.hxx, a.hxy - b.hxy, a.hyy - b.hyy};
}
inline Jet operator*(double s, const Jet& a) {
  return {s * a.v, s * a.gx, s * a.gy, s * a.hxx, s * a.hxy, s * a.hyy};
}
inline Jet operator+(const Jet& a, double c) { return a + Jet::constant(c); }
inline Jet operator-(const Jet& a, double c) { return a - Jet::constant(c); }
inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v,
          a.v * b.gx + b.v * a.gx,
          a.v * b.gy + b.v * a.gy,
          a.v * b.hxx + b.v * a.hxx + 2.0 * a.gx * b.gx,
          a.v * b.hxy + b.v * a.hxy + a.gx * b.gy + a.gy * b.gx,
          a.v * b.hyy + b.v * a.hyy + 2.0 * a.gy * b.gy};
}

/// g(a) given g(a.v), g'(a.v) and g''(a.v).
inline Jet compose(const Jet& a, double g0, double g1, double g2) {
  return {g0,
          g1 * a.gx,
          g1 * a.gy,
          g2 * a.gx * a.gx + g1 * a.hxx,
          g2 * a.gx * a.gy + g1 * a.hxy,
          g2 * a.gy * a.gy + g1 * a.hyy};
}

inline Jet sin(const Jet& a) {
  return compose(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
}
inline Jet cos(const Jet& a) {
  return compose(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
}

/// a^e for a >= 0. At a = 0 the derivative terms are taken as 0, which is the
/// limit whenever a has a critical point there (e.g. a = |x|^2).
inline Jet pow(const Jet& a, double e) {
  if (a.v == 0.0) return {0.0};
  return compose(a, std::pow(a.v, e), e * std::pow(a.v, e - 1.0),
                 e * (e - 1.0) * std::pow(a.v, e - 2.0));
}

}  // namespace nxfem
