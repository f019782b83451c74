#include "crossdiff/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace crossdiff {

namespace {

using cplx = std::complex<double>;

cplx eval_cubic(const CubicCoeffs& c, cplx z) { return ((z + c.c2) * z + c.c1) * z + c.c0; }
cplx eval_cubic_derivative(const CubicCoeffs& c, cplx z) { return (3.0 * z + 2.0 * c.c2) * z + c.c1; }

void polish(const CubicCoeffs& c, cplx& z) {
  cplx fz = eval_cubic(c, z);
  for (int it = 0; it < 3; ++it) {
    const cplx d = eval_cubic_derivative(c, z);
    if (d == cplx(0.0, 0.0)) return;
    const cplx next = z - fz / d;
    const cplx fnext = eval_cubic(c, next);
    if (!(std::abs(fnext) < std::abs(fz))) return;
    z = next;
    fz = fnext;
  }
}

Spectrum from_eigen(const Eigen::Matrix3d& m) {
  Eigen::EigenSolver<Eigen::Matrix3d> solver(m, false);
  const auto ev = solver.eigenvalues();
  return {ev[0], ev[1], ev[2]};
}

Eigen::Matrix3d companion(const CubicCoeffs& c) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = -c.c2;
  m(0, 1) = -c.c1;
  m(0, 2) = -c.c0;
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  return m;
}

void sort_spectrum(Spectrum& s) {
  std::sort(s.begin(), s.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

// Closed-form roots; returns false when the discriminant is too close to zero to
// trust the branch decision.
bool cardano(const CubicCoeffs& c, Spectrum& out) {
  const double shift = c.c2 / 3.0;
  const double p = c.c1 - c.c2 * c.c2 / 3.0;
  const double q = 2.0 * c.c2 * c.c2 * c.c2 / 27.0 - c.c2 * c.c1 / 3.0 + c.c0;
  const double half_q_sq = 0.25 * q * q;
  const double third_p_cube = (p / 3.0) * (p / 3.0) * (p / 3.0);
  const double disc = half_q_sq + third_p_cube;
  const double scale = std::max(half_q_sq, std::abs(third_p_cube));
  if (scale == 0.0) {
    out = {cplx(-shift), cplx(-shift), cplx(-shift)};
    return true;
  }
  if (std::abs(disc) <= 1e-12 * scale) return false;

  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double a = std::cbrt(-0.5 * q - std::copysign(sq, q));
    const double b = (a != 0.0) ? -p / (3.0 * a) : 0.0;
    const double re = -0.5 * (a + b) - shift;
    const double im = 0.5 * std::sqrt(3.0) * std::abs(a - b);
    out = {cplx(a + b - shift), cplx(re, im), cplx(re, -im)};
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp((3.0 * q / (2.0 * p)) * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    constexpr double third = 2.0 * std::numbers::pi / 3.0;
    out = {cplx(r * std::cos(phi) - shift), cplx(r * std::cos(phi - third) - shift),
           cplx(r * std::cos(phi - 2.0 * third) - shift)};
  }
  return true;
}

}  // namespace

CubicCoeffs characteristic_polynomial(const Matrix3& a) {
  return {-a.trace(), a.principal_minor_sum(), -a.determinant()};
}

Spectrum cubic_roots(const CubicCoeffs& c) {
  Spectrum s;
  if (cardano(c, s)) {
    for (auto& z : s) polish(c, z);
    // Conjugate pairs must stay exact conjugates after polishing.
    if (s[1].imag() != 0.0) s[2] = std::conj(s[1]);
  } else {
    s = from_eigen(companion(c));
  }
  sort_spectrum(s);
  return s;
}

Spectrum eigenvalues(const Matrix3& a) {
  const CubicCoeffs c = characteristic_polynomial(a);
  Spectrum s;
  if (cardano(c, s)) {
    for (auto& z : s) polish(c, z);
    if (s[1].imag() != 0.0) s[2] = std::conj(s[1]);
  } else {
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) m(r, col) = a(r, col);
    s = from_eigen(m);
  }
  sort_spectrum(s);
  return s;
}

Stability classify_spectrum(std::span<const std::complex<double>> eigs) {
  bool marginal = false;
  for (const auto& z : eigs) {
    if (z.real() > kMarginalBand) return Stability::Unstable;
    if (std::abs(z.real()) <= kMarginalBand) marginal = true;
  }
  return marginal ? Stability::Marginal : Stability::Stable;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable:
      return "stable";
    case Stability::Unstable:
      return "unstable";
    case Stability::Marginal:
      return "marginal";
  }
  return "unknown";
}

double spectral_abscissa(std::span<const std::complex<double>> eigs) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& z : eigs) m = std::max(m, z.real());
  return m;
}

}  // namespace crossdiff
