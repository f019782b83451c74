#pragma once

#include <array>
#include <complex>
#include <span>

#include "crossdiff/types.hpp"

namespace crossdiff {

/// Monic characteristic polynomial det(lambda I - A) = lambda^3 + c2 lambda^2 + c1 lambda + c0.
struct CubicCoeffs {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

CubicCoeffs characteristic_polynomial(const Matrix3& a);

using Spectrum = std::array<std::complex<double>, 3>;

/// Eigenvalues of a real 3x3 matrix, sorted by descending real part (conjugate
/// pairs ordered with positive imaginary part first).
///
/// Roots come from the closed-form cubic solution, polished by Newton steps on the
/// characteristic polynomial. When the discriminant is within 1e-12 (relative) of
/// zero the roots are taken from a Hessenberg QR iteration instead.
Spectrum eigenvalues(const Matrix3& a);

/// Same, but for an explicit monic cubic.
Spectrum cubic_roots(const CubicCoeffs& c);

enum class Stability { Stable, Unstable, Marginal };

/// Real parts below -1e-10 everywhere: stable. Any |Re| <= 1e-10 (and no positive
/// real part): marginal. Otherwise unstable.
Stability classify_spectrum(std::span<const std::complex<double>> eigs);

inline constexpr double kMarginalBand = 1e-10;

const char* to_string(Stability s);

/// Largest real part.
double spectral_abscissa(std::span<const std::complex<double>> eigs);

}  // namespace crossdiff
