#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crossdiff/equilibria.hpp"
#include "crossdiff/kinetics.hpp"
#include "crossdiff/spectrum.hpp"

namespace crossdiff {

/// Diffusion matrix with the model's sparsity: d11, d22, d33 on the diagonal and
/// d32 at (w, v). All other entries are zero.
struct DiffusionMatrix {
  double d11 = 0.0;
  double d22 = 0.0;
  double d33 = 0.0;
  double d32 = 0.0;

  static DiffusionMatrix from(const ModelParams& p) { return {p.d11, p.d22, p.d33, p.d32}; }
  Matrix3 matrix() const;
};

/// Eigen-classification of a fixed point. Throws ArgumentError if the reaction
/// residual at `e` is 1e-8 or larger.
Equilibrium classify(const ModelParams& p, const State& e);

struct SweepRow {
  double p2 = 0.0;
  std::optional<Equilibrium> cce;  ///< empty: no coexistence equilibrium at this sample
};

struct StabilitySweep {
  std::vector<SweepRow> rows;
  /// Longest run of consecutive stable samples, as (first p2, last p2).
  std::optional<std::pair<double, double>> stable_interval;
};

/// Follows the coexistence branch across `p2_values` (largest-v root at the first
/// sample, then the root nearest the previous one) and records its spectrum.
StabilitySweep stability_sweep(const ModelParams& p, std::span<const double> p2_values);

struct HopfResult {
  double p2_critical = 0.0;
  std::complex<double> eigenvalue;  ///< upper member of the crossing pair
  std::pair<double, double> bracket;
  State equilibrium;
};

/// Real part of the complex-conjugate pair with the largest real part, or nullopt
/// if the spectrum is real.
std::optional<double> dominant_pair_real(const Spectrum& s);

/// Locates a Hopf crossing of the coexistence branch in [p2_lo, p2_hi]. The branch
/// is marched on a coarse grid and the first sign change of the dominant pair's real
/// part is bisected to `tol`. Returns nullopt if there is no crossing.
/// Throws BranchLostError if the branch disappears, ArgumentError if p2_lo >= p2_hi.
std::optional<HopfResult> hopf_scan(const ModelParams& p, double p2_lo, double p2_hi, double tol = 1e-4);

/// A(k) = J(e) - D k^2.
Matrix3 dispersion_matrix(const ModelParams& p, const State& e, double k);

struct DispersionPoint {
  double k = 0.0;
  double growth = 0.0;     ///< max Re lambda(A(k))
  double frequency = 0.0;  ///< |Im| of the eigenvalue attaining the growth
};

struct DispersionResult {
  std::vector<DispersionPoint> points;
  double k_max = 0.0;
  double growth_max = 0.0;
};

/// 0 to 300 in steps of 0.5.
std::vector<double> default_k_grid();

/// Growth rate over a nonnegative, strictly increasing wavenumber grid.
DispersionResult dispersion_relation(const ModelParams& p, const State& e, std::span<const double> k_grid);

/// Characteristic polynomial of A(k) written as -lambda^3 + a2 lambda^2 + a1 lambda + a0,
/// with each coefficient expanded in powers of k^2 (index = power of k^2).
struct DispersionPolynomial {
  std::array<double, 2> a2{};  ///< trace
  std::array<double, 3> a1{};  ///< minus the sum of principal 2x2 minors
  std::array<double, 4> a0{};  ///< determinant

  double eval_a2(double k) const;
  double eval_a1(double k) const;
  double eval_a0(double k) const;
};

DispersionPolynomial dispersion_polynomial(const ModelParams& p, const State& e);

/// Bisection in d32 on growth_max over `k_grid` down to `tol`. The equilibrium does
/// not depend on d32. Throws BracketError if growth_max has the same sign at both ends.
double critical_d32(const ModelParams& p, const State& e, double d32_lo, double d32_hi,
                    std::span<const double> k_grid, double tol = 1e-3);

/// Bisection in d32 on max_k det(A(k)) (the determinant sign condition for a
/// real eigenvalue crossing zero). Throws BracketError without a sign change.
double determinant_threshold_d32(const ModelParams& p, const State& e, double d32_lo, double d32_hi,
                                 std::span<const double> k_grid, double tol = 1e-3);

}  // namespace crossdiff
