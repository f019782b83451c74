#pragma once

#include <complex>
#include <span>
#include <vector>

namespace crossdiff {

// Coefficient spans are ordered by ascending power: coeffs[i] multiplies x^i.

double poly_eval(std::span<const double> coeffs, double x);
double poly_derivative_eval(std::span<const double> coeffs, double x);

/// All complex roots via eigenvalues of the companion matrix. Leading zero
/// coefficients are dropped first; throws ArgumentError for the zero polynomial.
std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs);

/// First column of the Routh array.
struct RouthColumn {
  std::vector<double> entries;     ///< R1 .. R(n+1), R1 = leading coefficient
  std::vector<bool> substituted;   ///< row pivot was zero and replaced by epsilon
  int sign_changes = 0;            ///< roots with positive real part
  bool ambiguous = false;          ///< +eps and -eps substitutions disagree on the count
};

/// Routh array for a polynomial of degree n >= 1 (ascending coefficients).
///
/// A zero pivot is replaced by a small epsilon (scaled to the coefficients) and the
/// row is flagged; the column is evaluated once with +eps and once with -eps and
/// `ambiguous` is set when the two sign-change counts differ. A row that vanishes
/// entirely is rebuilt from the derivative of the auxiliary polynomial.
/// Throws ArgumentError if the leading coefficient is zero.
RouthColumn routh_array(std::span<const double> coeffs);

}  // namespace crossdiff
