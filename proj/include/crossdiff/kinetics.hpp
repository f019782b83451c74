#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "crossdiff/types.hpp"

namespace crossdiff {

/// Dimensionless coefficients of the effector/tumor/IL-2 reaction-diffusion model.
///
/// Kinetic rates follow the dimensionless system directly; d11, d22, d33 are the
/// self-diffusion coefficients, d32 the cross-diffusion of the tumor gradient into
/// the IL-2 equation, tau_L = (Lx/Ly)^2 the anisotropy factor of the y-derivative.
struct ModelParams {
  double c = 0.0;    ///< antigenicity
  double mu1 = 0.0;  ///< effector decay
  double mu3 = 0.0;  ///< IL-2 decay
  double p1 = 0.0;   ///< IL-2 driven effector proliferation
  double p2 = 0.0;   ///< effector killing of tumor cells
  double p3 = 0.0;   ///< IL-2 production
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double s1 = 0.0;  ///< adoptive cell therapy source
  double s3 = 0.0;  ///< cytokine therapy source
  double r2 = 0.0;  ///< tumor birth rate
  double b = 0.0;   ///< inverse carrying capacity
  double d11 = 0.0;
  double d22 = 0.0;
  double d33 = 0.0;
  double d32 = 0.0;
  double tau_L = 1.0;

  /// Throws ArgumentError when a positivity invariant is violated.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Name/member table used by config files, CLI flags and the Python bindings.
inline constexpr std::array<std::pair<std::string_view, double ModelParams::*>, 18> kParamFields{{
    {"c", &ModelParams::c},       {"mu1", &ModelParams::mu1}, {"mu3", &ModelParams::mu3},
    {"p1", &ModelParams::p1},     {"p2", &ModelParams::p2},   {"p3", &ModelParams::p3},
    {"g1", &ModelParams::g1},     {"g2", &ModelParams::g2},   {"g3", &ModelParams::g3},
    {"s1", &ModelParams::s1},     {"s3", &ModelParams::s3},   {"r2", &ModelParams::r2},
    {"b", &ModelParams::b},       {"d11", &ModelParams::d11}, {"d22", &ModelParams::d22},
    {"d33", &ModelParams::d33},   {"d32", &ModelParams::d32}, {"tau_L", &ModelParams::tau_L},
}};

/// Pointer-to-member for a parameter name, or nullopt if the name is unknown.
std::optional<double ModelParams::*> param_field(std::string_view name);

/// Table 1 kinetics with c = 0.25, p2 = 0.5, no therapy and the pattern-run
/// diffusion coefficients (d11 = 1e-3, d22 = 1.99e-5, d33 = 1e-2, d32 = 0).
ModelParams kirschner_table1();

/// Named presets: "kirschner-table1", "untreated" (s1 = s3 = 0) and
/// "treated" (s1 = 0.0035, s3 = 0.2). Throws ArgumentError for other names.
ModelParams preset(std::string_view name);

/// Dimensional coefficients (the model before scaling).
struct DimensionalParams {
  double c = 0.0, mu1 = 0.0, mu3 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
  double g1 = 0.0, g2 = 0.0, g3 = 0.0, s1 = 0.0, s3 = 0.0, r2 = 0.0, b = 0.0;
  double D11 = 0.0, D22 = 0.0, D33 = 0.0, D32 = 0.0;
};

/// Reference scales used to make the model dimensionless.
struct ScalingSet {
  double tau = 1.0;
  double Lx = 1.0;
  double Ly = 1.0;
  double E0 = 1.0;
  double T0 = 1.0;
  double IL0 = 1.0;

  void validate() const;
};

ModelParams nondimensionalize(const DimensionalParams& dim, const ScalingSet& scaling);
DimensionalParams dimensionalize(const ModelParams& p, const ScalingSet& scaling);

/// Reaction term F(U) of the model.
/// Throws DomainError if g1 + w, g2 + v or g3 + v vanishes or the result is not finite.
State reaction_rhs(const ModelParams& p, const State& s);

/// Analytic Jacobian dF/dU. Entry (v, w) is identically zero.
Jacobian3 jacobian(const ModelParams& p, const State& s);

}  // namespace crossdiff
