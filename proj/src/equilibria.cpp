#include "crossdiff/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "crossdiff/errors.hpp"

namespace crossdiff {

const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::CFE:
      return "CFE";
    case EquilibriumKind::CCE:
      return "CCE";
    case EquilibriumKind::Other:
      return "OTHER";
  }
  return "OTHER";
}

namespace {

Equilibrium make_equilibrium(const ModelParams& p, EquilibriumKind kind, const State& s) {
  Equilibrium e;
  e.kind = kind;
  e.state = s;
  e.eigenvalues = eigenvalues(jacobian(p, s));
  e.stability = classify_spectrum(e.eigenvalues);
  return e;
}

double polish_quintic_root(const QuinticCoeffs& q, double v) {
  double fv = q(v);
  for (int it = 0; it < 8; ++it) {
    const double d = q.derivative(v);
    if (d == 0.0) break;
    const double next = v - fv / d;
    const double fnext = q(next);
    if (!(std::abs(fnext) < std::abs(fv))) break;
    v = next;
    fv = fnext;
  }
  return v;
}

bool strictly_increasing(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

}  // namespace

std::optional<Equilibrium> cfe(const ModelParams& p) {
  const double den = p.p1 * p.s3 - p.s3 * p.mu1 - p.g1 * p.mu1 * p.mu3;
  if (!(den < 0.0)) return std::nullopt;
  State s;
  s.u = -p.s1 * (p.s3 + p.g1 * p.mu3) / den;
  s.v = 0.0;
  s.w = p.s3 / p.mu3;
  // -0.0 from the closed form when s1 = 0
  if (s.u == 0.0) s.u = 0.0;
  return make_equilibrium(p, EquilibriumKind::CFE, s);
}

// Expanded from F = 0 with u and w eliminated. Two terms differ from the
// commonly printed symbolic form: the sign of the b g3 term in a2 and the source
// terms in a1; both agree with the numerical coefficient lists.
QuinticCoeffs quintic_coeffs(const ModelParams& p) {
  const double b = p.b, c = p.c, p1 = p.p1, p2 = p.p2, p3 = p.p3, r2 = p.r2;
  const double s1 = p.s1, s3 = p.s3, mu1 = p.mu1, mu3 = p.mu3;
  const double g1 = p.g1, g2 = p.g2, g3 = p.g3;
  const double k = p1 - mu1;
  const double sg = s3 + g1 * mu3;
  const double r22 = r2 * r2;

  QuinticCoeffs q;
  q.a[5] = b * b * p3 * r22 * k;
  q.a[4] = -b * c * p2 * p3 * r2 - 2.0 * b * p3 * r22 * k + 2.0 * b * b * g2 * p3 * r22 * k;
  q.a[3] = c * p2 * p3 * r2 - b * c * g2 * p2 * p3 * r2 - b * p2 * p3 * r2 * s1 - b * p1 * p2 * r2 * s3 +
           p3 * r22 * k - 4.0 * b * g2 * p3 * r22 * k + b * b * g2 * g2 * p3 * r22 * k + b * p2 * r2 * mu1 * sg;
  q.a[2] = c * g2 * p2 * p3 * r2 + p2 * p3 * r2 * s1 - b * g2 * p2 * p3 * r2 * s1 + p1 * p2 * r2 * s3 -
           b * g2 * p1 * p2 * r2 * s3 + 2.0 * g2 * p3 * r22 * k - 2.0 * b * g2 * g2 * p3 * r22 * k +
           c * p2 * p2 * sg - p2 * r2 * mu1 * sg + b * g2 * p2 * r2 * mu1 * sg -
           b * g3 * p2 * r2 * (p1 * s3 - mu1 * sg);
  q.a[1] = g2 * g2 * p3 * r22 * k + c * g3 * p2 * p2 * sg - g2 * p2 * r2 * mu1 * sg +
           g3 * p2 * r2 * (p1 * s3 - mu1 * sg) + b * g2 * g3 * p2 * r2 * (-p1 * s3 + mu1 * sg) +
           p2 * (g1 * mu3 * p2 * s1 + g2 * p1 * r2 * s3 + g2 * p3 * r2 * s1 + p2 * s1 * s3);
  q.a[0] = g3 * p2 * p2 * s1 * sg - g2 * g3 * p2 * r2 * (-p1 * s3 + mu1 * sg);
  return q;
}

State coexistence_state(const ModelParams& p, double v) {
  State s;
  s.v = v;
  const double logistic = (p.g2 + v) * (1.0 - p.b * v);
  s.u = p.r2 * logistic / p.p2;
  s.w = (p.s3 * p.p2 * (p.g3 + v) + p.p3 * p.r2 * v * logistic) / (p.p2 * (p.g3 + v) * p.mu3);
  return s;
}

State refine_equilibrium(const ModelParams& p, State x, double tol, int max_iter, double accept) {
  State r = reaction_rhs(p, x);
  double norm = r.max_norm();
  for (int it = 0; it < max_iter && norm >= tol; ++it) {
    const Jacobian3 j = jacobian(p, x);
    Eigen::Matrix3d jm;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) jm(a, b) = j(a, b);
    const Eigen::Vector3d rhs(-r.u, -r.v, -r.w);
    const Eigen::Vector3d dx = jm.partialPivLu().solve(rhs);
    if (!dx.allFinite()) break;
    const State step{dx[0], dx[1], dx[2]};

    bool improved = false;
    double lambda = 1.0;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const State trial = x + lambda * step;
      State rt;
      try {
        rt = reaction_rhs(p, trial);
      } catch (const DomainError&) {
        continue;
      }
      const double nt = rt.max_norm();
      if (nt < norm) {
        x = trial;
        r = rt;
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(norm < accept)) {
    std::ostringstream msg;
    msg.precision(9);
    msg << "equilibrium refinement did not converge near (" << x.u << ", " << x.v << ", " << x.w
        << "), residual " << norm;
    throw ConvergenceError(msg.str());
  }
  return x;
}

std::vector<Equilibrium> cce_solve(const ModelParams& p) {
  const QuinticCoeffs q = quintic_coeffs(p);
  const bool all_zero = std::all_of(q.a.begin(), q.a.end(), [](double x) { return x == 0.0; });
  if (all_zero) return {};
  const double v_cap = 1.0 / p.b;

  std::vector<Equilibrium> out;
  for (const auto& z : poly_roots(q.a)) {
    if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) continue;
    const double v = polish_quintic_root(q, z.real());
    if (!(v > 0.0 && v < v_cap)) continue;
    const State guess = coexistence_state(p, v);
    if (!(guess.u > 0.0 && guess.w > 0.0)) continue;

    State s;
    try {
      s = refine_equilibrium(p, guess);
    } catch (const ConvergenceError& e) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "coexistence root v = " << v << ": " << e.what();
      throw ConvergenceError(msg.str());
    }
    if (!(s.u > 0.0 && s.v > 0.0 && s.w > 0.0 && s.v < v_cap)) continue;

    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Equilibrium& e) {
      return (e.state - s).max_norm() < 1e-8;
    });
    if (duplicate) continue;
    out.push_back(make_equilibrium(p, EquilibriumKind::CCE, s));
  }
  std::sort(out.begin(), out.end(),
            [](const Equilibrium& a, const Equilibrium& b) { return a.state.v < b.state.v; });
  return out;
}

RouthColumn routh_first_column(const QuinticCoeffs& q) {
  if (q.a[5] == 0.0) throw ArgumentError("routh_first_column: a5 = 0, the polynomial is not quintic");
  return routh_array(q.a);
}

bool routh_existence_rule(const QuinticCoeffs& q, Scenario scenario) {
  if (q.a[5] == 0.0) return false;
  const RouthColumn col = routh_first_column(q);
  const double r4 = col.entries[3];
  const double r5 = col.entries[4];
  const bool both_negative = r4 < 0.0 && r5 < 0.0;
  const bool both_positive = r4 > 0.0 && r5 > 0.0;
  if (scenario == Scenario::Untreated) return both_negative || both_positive;
  const bool mixed = r4 > 0.0 && r5 < 0.0;
  return q.a[0] < 0.0 && (both_negative || mixed || both_positive);
}

RegionGrid existence_region_scan(const ModelParams& p, std::span<const double> p2_grid,
                                 std::span<const double> c_grid, Scenario scenario) {
  if (p2_grid.empty() || c_grid.empty()) throw ArgumentError("existence_region_scan: empty grid");
  if (!strictly_increasing(p2_grid) || !strictly_increasing(c_grid))
    throw ArgumentError("existence_region_scan: grids must be strictly increasing");

  RegionGrid g;
  g.p2.assign(p2_grid.begin(), p2_grid.end());
  g.c.assign(c_grid.begin(), c_grid.end());
  g.exists.assign(g.p2.size() * g.c.size(), 0);
  const auto n_p2 = static_cast<long>(g.p2.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n_p2; ++i) {
    ModelParams local = p;
    local.p2 = g.p2[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < g.c.size(); ++j) {
      local.c = g.c[j];
      g.exists[static_cast<std::size_t>(i) * g.c.size() + j] =
          routh_existence_rule(quintic_coeffs(local), scenario) ? 1 : 0;
    }
  }
  return g;
}

}  // namespace crossdiff
