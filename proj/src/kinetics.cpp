#include "crossdiff/kinetics.hpp"

#include <cmath>
#include <string>

#include "crossdiff/errors.hpp"

namespace crossdiff {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ArgumentError(std::string("parameter ") + name + " must be positive and finite, got " +
                        std::to_string(value));
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ArgumentError(std::string("parameter ") + name + " must be non-negative and finite, got " +
                        std::to_string(value));
  }
}

void check_denominator(double value, const char* name) {
  if (value == 0.0) throw DomainError(std::string("denominator ") + name + " vanishes");
}

}  // namespace

void ModelParams::validate() const {
  require_positive(c, "c");
  require_positive(mu1, "mu1");
  require_positive(mu3, "mu3");
  require_positive(p1, "p1");
  require_positive(p2, "p2");
  require_positive(p3, "p3");
  require_positive(g1, "g1");
  require_positive(g2, "g2");
  require_positive(g3, "g3");
  require_positive(r2, "r2");
  require_positive(b, "b");
  require_positive(d11, "d11");
  require_positive(d22, "d22");
  require_positive(d33, "d33");
  require_positive(tau_L, "tau_L");
  require_nonnegative(s1, "s1");
  require_nonnegative(s3, "s3");
  if (!std::isfinite(d32)) throw ArgumentError("parameter d32 must be finite");
}

std::optional<double ModelParams::*> param_field(std::string_view name) {
  for (const auto& [key, member] : kParamFields) {
    if (key == name) return member;
  }
  return std::nullopt;
}

ModelParams kirschner_table1() {
  ModelParams p;
  p.mu1 = 0.167;
  p.p1 = 0.69167;
  p.g1 = 20.0;
  p.r2 = 1.0;
  p.g2 = 0.1;
  p.p3 = 27.778;
  p.g3 = 0.001;
  p.mu3 = 55.55556;
  p.b = 1.0;
  p.c = 0.25;
  p.p2 = 0.5;
  p.s1 = 0.0;
  p.s3 = 0.0;
  p.d11 = 0.001;
  p.d22 = 1.99e-5;
  p.d33 = 0.01;
  p.d32 = 0.0;
  p.tau_L = 1.0;
  return p;
}

ModelParams preset(std::string_view name) {
  ModelParams p = kirschner_table1();
  if (name == "kirschner-table1" || name == "untreated") return p;
  if (name == "treated") {
    p.s1 = 0.0035;
    p.s3 = 0.2;
    return p;
  }
  throw ArgumentError("unknown preset '" + std::string(name) +
                      "' (expected kirschner-table1, untreated or treated)");
}

void ScalingSet::validate() const {
  require_positive(tau, "tau");
  require_positive(Lx, "Lx");
  require_positive(Ly, "Ly");
  require_positive(E0, "E0");
  require_positive(T0, "T0");
  require_positive(IL0, "IL0");
}

ModelParams nondimensionalize(const DimensionalParams& d, const ScalingSet& s) {
  s.validate();
  const double lx2 = s.Lx * s.Lx;
  ModelParams p;
  p.p1 = s.tau * d.p1;
  p.p2 = s.tau * d.p2 * s.E0 / s.T0;
  p.p3 = s.tau * d.p3 * s.E0 / s.IL0;
  p.g1 = d.g1 / s.IL0;
  p.g2 = d.g2 / s.T0;
  p.g3 = d.g3 / s.T0;
  p.c = s.tau * d.c * s.T0 / s.E0;
  p.mu1 = s.tau * d.mu1;
  p.mu3 = s.tau * d.mu3;
  p.s1 = s.tau * d.s1 / s.E0;
  p.s3 = s.tau * d.s3 / s.IL0;
  p.r2 = s.tau * d.r2;
  p.b = d.b * s.T0;
  p.d11 = s.tau * d.D11 / lx2;
  p.d22 = s.tau * d.D22 / lx2;
  p.d33 = s.tau * d.D33 / lx2;
  p.d32 = s.tau * d.D32 * s.T0 / (lx2 * s.IL0);
  const double ratio = s.Lx / s.Ly;
  p.tau_L = ratio * ratio;
  return p;
}

DimensionalParams dimensionalize(const ModelParams& p, const ScalingSet& s) {
  s.validate();
  const double lx2 = s.Lx * s.Lx;
  DimensionalParams d;
  d.p1 = p.p1 / s.tau;
  d.p2 = p.p2 * s.T0 / (s.tau * s.E0);
  d.p3 = p.p3 * s.IL0 / (s.tau * s.E0);
  d.g1 = p.g1 * s.IL0;
  d.g2 = p.g2 * s.T0;
  d.g3 = p.g3 * s.T0;
  d.c = p.c * s.E0 / (s.tau * s.T0);
  d.mu1 = p.mu1 / s.tau;
  d.mu3 = p.mu3 / s.tau;
  d.s1 = p.s1 * s.E0 / s.tau;
  d.s3 = p.s3 * s.IL0 / s.tau;
  d.r2 = p.r2 / s.tau;
  d.b = p.b / s.T0;
  d.D11 = p.d11 * lx2 / s.tau;
  d.D22 = p.d22 * lx2 / s.tau;
  d.D33 = p.d33 * lx2 / s.tau;
  d.D32 = p.d32 * lx2 * s.IL0 / (s.tau * s.T0);
  return d;
}

State reaction_rhs(const ModelParams& p, const State& s) {
  const double den1 = p.g1 + s.w;
  const double den2 = p.g2 + s.v;
  const double den3 = p.g3 + s.v;
  check_denominator(den1, "g1 + w");
  check_denominator(den2, "g2 + v");
  check_denominator(den3, "g3 + v");
  State f;
  f.u = p.c * s.v - p.mu1 * s.u + p.p1 * s.u * s.w / den1 + p.s1;
  f.v = p.r2 * s.v * (1.0 - p.b * s.v) - p.p2 * s.u * s.v / den2;
  f.w = p.p3 * s.u * s.v / den3 - p.mu3 * s.w + p.s3;
  if (!f.finite()) throw DomainError("reaction term is not finite");
  return f;
}

Jacobian3 jacobian(const ModelParams& p, const State& s) {
  const double den1 = p.g1 + s.w;
  const double den2 = p.g2 + s.v;
  const double den3 = p.g3 + s.v;
  check_denominator(den1, "g1 + w");
  check_denominator(den2, "g2 + v");
  check_denominator(den3, "g3 + v");
  Jacobian3 j;
  j(0, 0) = p.p1 * s.w / den1 - p.mu1;
  j(0, 1) = p.c;
  j(0, 2) = p.p1 * s.u * p.g1 / (den1 * den1);
  j(1, 0) = -p.p2 * s.v / den2;
  j(1, 1) = p.r2 * (1.0 - 2.0 * p.b * s.v) - p.p2 * s.u * p.g2 / (den2 * den2);
  j(1, 2) = 0.0;
  j(2, 0) = p.p3 * s.v / den3;
  j(2, 1) = p.p3 * s.u * p.g3 / (den3 * den3);
  j(2, 2) = -p.mu3;
  for (double e : j.a) {
    if (!std::isfinite(e)) throw DomainError("Jacobian entry is not finite");
  }
  return j;
}

}  // namespace crossdiff
