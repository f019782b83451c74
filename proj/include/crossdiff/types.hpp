#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace crossdiff {

/// A point (u, v, w) in concentration space: effector cells, tumor cells, IL-2.
struct State {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? u : (i == 1 ? v : w); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? u : (i == 1 ? v : w); }

  constexpr State& operator+=(const State& o) {
    u += o.u;
    v += o.v;
    w += o.w;
    return *this;
  }
  constexpr State& operator-=(const State& o) {
    u -= o.u;
    v -= o.v;
    w -= o.w;
    return *this;
  }
  constexpr State& operator*=(double s) {
    u *= s;
    v *= s;
    w *= s;
    return *this;
  }

  friend constexpr State operator+(State a, const State& b) { return a += b; }
  friend constexpr State operator-(State a, const State& b) { return a -= b; }
  friend constexpr State operator*(State a, double s) { return a *= s; }
  friend constexpr State operator*(double s, State a) { return a *= s; }
  friend constexpr bool operator==(const State&, const State&) = default;

  double max_norm() const { return std::max({std::abs(u), std::abs(v), std::abs(w)}); }
  bool finite() const { return std::isfinite(u) && std::isfinite(v) && std::isfinite(w); }
};

/// Dense 3x3 matrix, row/column order (u, v, w).
struct Matrix3 {
  std::array<double, 9> a{};

  constexpr double& operator()(std::size_t r, std::size_t c) { return a[3 * r + c]; }
  constexpr double operator()(std::size_t r, std::size_t c) const { return a[3 * r + c]; }

  constexpr double trace() const { return a[0] + a[4] + a[8]; }
  constexpr double determinant() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
  /// Sum of the three principal 2x2 minors.
  constexpr double principal_minor_sum() const {
    return (a[0] * a[4] - a[1] * a[3]) + (a[0] * a[8] - a[2] * a[6]) + (a[4] * a[8] - a[5] * a[7]);
  }

  friend constexpr Matrix3 operator-(Matrix3 x, const Matrix3& y) {
    for (std::size_t i = 0; i < 9; ++i) x.a[i] -= y.a[i];
    return x;
  }
  friend constexpr Matrix3 operator*(double s, Matrix3 x) {
    for (auto& e : x.a) e *= s;
    return x;
  }
  friend constexpr bool operator==(const Matrix3&, const Matrix3&) = default;
};

using Jacobian3 = Matrix3;

}  // namespace crossdiff
