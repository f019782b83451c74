#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crossdiff/kinetics.hpp"
#include "crossdiff/polynomial.hpp"
#include "crossdiff/spectrum.hpp"

namespace crossdiff {

enum class EquilibriumKind { CFE, CCE, Other };

const char* to_string(EquilibriumKind k);

/// A classified steady state of the diffusion-free system.
struct Equilibrium {
  EquilibriumKind kind = EquilibriumKind::Other;
  State state;
  Spectrum eigenvalues{};
  Stability stability = Stability::Marginal;
};

/// Coefficients of the quintic whose roots in (0, 1/b) are coexistence tumor levels.
/// `a[i]` multiplies v^i.
struct QuinticCoeffs {
  std::array<double, 6> a{};

  double operator()(double v) const { return poly_eval(a, v); }
  double derivative(double v) const { return poly_derivative_eval(a, v); }
};

/// Cancer-free equilibrium (u*, 0, s3/mu3), present when p1 s3 - s3 mu1 - g1 mu1 mu3 < 0.
/// Without therapy this is the origin.
std::optional<Equilibrium> cfe(const ModelParams& p);

QuinticCoeffs quintic_coeffs(const ModelParams& p);

/// u and w on the coexistence manifold for a given tumor level v.
State coexistence_state(const ModelParams& p, double v);

/// All coexistence equilibria, sorted by ascending v.
///
/// Real quintic roots in (0, 1/b) are mapped to (u, v, w), kept when u, w > 0 and
/// polished with damped Newton on the full system (|F| < 1e-12 target). Roots closer
/// than 1e-8 are merged. Throws ConvergenceError if a root cannot be polished to a
/// residual below 1e-10.
std::vector<Equilibrium> cce_solve(const ModelParams& p);

/// Damped Newton on F(U) = 0 with the analytic Jacobian. Returns the polished state;
/// throws ConvergenceError if the residual does not drop below `accept`.
State refine_equilibrium(const ModelParams& p, State guess, double tol = 1e-12, int max_iter = 50,
                         double accept = 1e-10);

/// Routh column of the quintic. Throws ArgumentError when a5 = 0.
RouthColumn routh_first_column(const QuinticCoeffs& q);

enum class Scenario { Untreated, Treated };

/// Existence indicator over a (p2, c) grid; `exists[i * c.size() + j]` refers to
/// (p2[i], c[j]).
struct RegionGrid {
  std::vector<double> p2;
  std::vector<double> c;
  std::vector<std::uint8_t> exists;

  bool at(std::size_t i, std::size_t j) const { return exists[i * c.size() + j] != 0; }
};

/// Routh-condition test at a single point. R4, R5 are the 4th and 5th first-column
/// entries. Untreated: (R4<0 and R5<0) or (R4>0 and R5>0). Treated additionally
/// admits (R4>0 and R5<0) and requires a0 < 0.
bool routh_existence_rule(const QuinticCoeffs& q, Scenario scenario);

RegionGrid existence_region_scan(const ModelParams& p, std::span<const double> p2_grid,
                                 std::span<const double> c_grid, Scenario scenario);

}  // namespace crossdiff
