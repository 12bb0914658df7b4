#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "maggeo/linalg.hpp"

namespace maggeo {

// Order-2 jet of a scalar function of n coordinates: value, gradient and
// (symmetric) Hessian, propagated by the exact chain rule.  All derivative
// data downstream of field evaluation comes from these, never from finite
// differences.
struct Jet2 {
  double v = 0.0;
  Vec g;
  Mat h;

  Jet2() = default;
  Jet2(double value, Vec grad, Mat hess) : v(value), g(std::move(grad)), h(std::move(hess)) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet2 constant(double c, int n) { return {c, Vec::Zero(n), Mat::Zero(n, n)}; }

  static Jet2 coordinate(double x, int i, int n) {
    Jet2 j = constant(x, n);
    j.g(i) = 1.0;
    return j;
  }

  Jet2 operator-() const { return {-v, -g, -h}; }

  Jet2 operator+(const Jet2 &o) const { return {v + o.v, g + o.g, h + o.h}; }
  Jet2 operator-(const Jet2 &o) const { return {v - o.v, g - o.g, h - o.h}; }

  Jet2 operator*(const Jet2 &o) const {
    return {v * o.v, v * o.g + o.v * g,
            v * o.h + o.v * h + g * o.g.transpose() + o.g * g.transpose()};
  }

  Jet2 operator/(const Jet2 &o) const { return *this * o.reciprocal(); }

  Jet2 operator+(double c) const { return {v + c, g, h}; }
  Jet2 operator-(double c) const { return {v - c, g, h}; }
  Jet2 operator*(double c) const { return {v * c, g * c, h * c}; }
  Jet2 operator/(double c) const { return {v / c, g / c, h / c}; }

  Jet2 reciprocal() const {
    if (v == 0.0) throw std::domain_error("jet: division by zero value");
    const double inv = 1.0 / v;
    return chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  // f(this) for scalar f with derivatives fp, fpp at the value
  Jet2 chain(double f, double fp, double fpp) const {
    return {f, fp * g, fp * h + fpp * (g * g.transpose())};
  }
};

inline Jet2 operator+(double c, const Jet2 &j) { return j + c; }
inline Jet2 operator-(double c, const Jet2 &j) { return (-j) + c; }
inline Jet2 operator*(double c, const Jet2 &j) { return j * c; }
inline Jet2 operator/(double c, const Jet2 &j) { return j.reciprocal() * c; }

inline Jet2 sin(const Jet2 &j) { return j.chain(std::sin(j.v), std::cos(j.v), -std::sin(j.v)); }
inline Jet2 cos(const Jet2 &j) { return j.chain(std::cos(j.v), -std::sin(j.v), -std::cos(j.v)); }
inline Jet2 tan(const Jet2 &j) {
  const double t = std::tan(j.v);
  const double s = 1.0 + t * t;
  return j.chain(t, s, 2.0 * t * s);
}
inline Jet2 exp(const Jet2 &j) {
  const double e = std::exp(j.v);
  return j.chain(e, e, e);
}
inline Jet2 log(const Jet2 &j) {
  if (j.v <= 0.0) throw std::domain_error("jet: log of a non-positive value");
  return j.chain(std::log(j.v), 1.0 / j.v, -1.0 / (j.v * j.v));
}
inline Jet2 sqrt(const Jet2 &j) {
  if (j.v <= 0.0) throw std::domain_error("jet: sqrt of a non-positive value");
  const double s = std::sqrt(j.v);
  return j.chain(s, 0.5 / s, -0.25 / (s * j.v));
}
inline Jet2 sinh(const Jet2 &j) { return j.chain(std::sinh(j.v), std::cosh(j.v), std::sinh(j.v)); }
inline Jet2 cosh(const Jet2 &j) { return j.chain(std::cosh(j.v), std::sinh(j.v), std::cosh(j.v)); }

// integer power by repeated multiplication (exact for integer inputs)
inline Jet2 powi(const Jet2 &j, int e) {
  if (e < 0) return powi(j, -e).reciprocal();
  Jet2 r = Jet2::constant(1.0, j.dim());
  Jet2 base = j;
  for (int k = e; k > 0; k >>= 1) {
    if (k & 1) r = r * base;
    if (k > 1) base = base * base;
  }
  return r;
}

inline Jet2 pow(const Jet2 &j, double e) {
  if (e == std::floor(e) && std::abs(e) <= 64.0) return powi(j, static_cast<int>(e));
  const double f = std::pow(j.v, e);
  return j.chain(f, e * std::pow(j.v, e - 1.0), e * (e - 1.0) * std::pow(j.v, e - 2.0));
}

inline std::vector<Jet2> coordinate_jets(const Vec &x) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet2::coordinate(x(i), i, n));
  return out;
}

} // namespace maggeo
