#include "crossdiff/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "crossdiff/errors.hpp"

namespace crossdiff {

Matrix3 DiffusionMatrix::matrix() const {
  Matrix3 m;
  m(0, 0) = d11;
  m(1, 1) = d22;
  m(2, 1) = d32;
  m(2, 2) = d33;
  return m;
}

Equilibrium classify(const ModelParams& p, const State& e) {
  const double residual = reaction_rhs(p, e).max_norm();
  if (!(residual < 1e-8)) {
    std::ostringstream msg;
    msg << "classify: state is not a fixed point (residual " << residual << ")";
    throw ArgumentError(msg.str());
  }
  Equilibrium out;
  out.state = e;
  if (e.v == 0.0)
    out.kind = EquilibriumKind::CFE;
  else if (e.u > 0.0 && e.v > 0.0 && e.w > 0.0)
    out.kind = EquilibriumKind::CCE;
  else
    out.kind = EquilibriumKind::Other;
  out.eigenvalues = eigenvalues(jacobian(p, e));
  out.stability = classify_spectrum(out.eigenvalues);
  return out;
}

namespace {

// Coexistence equilibrium nearest to `previous`, or the one with the largest v.
std::optional<Equilibrium> track_cce(const ModelParams& p, const std::optional<State>& previous) {
  auto roots = cce_solve(p);
  if (roots.empty()) return std::nullopt;
  if (!previous) return roots.back();
  return *std::min_element(roots.begin(), roots.end(), [&](const Equilibrium& a, const Equilibrium& b) {
    return (a.state - *previous).max_norm() < (b.state - *previous).max_norm();
  });
}

}  // namespace

StabilitySweep stability_sweep(const ModelParams& p, std::span<const double> p2_values) {
  StabilitySweep out;
  std::optional<State> previous;
  for (double p2 : p2_values) {
    ModelParams local = p;
    local.p2 = p2;
    SweepRow row;
    row.p2 = p2;
    row.cce = track_cce(local, previous);
    if (row.cce) previous = row.cce->state;
    out.rows.push_back(row);
  }

  std::size_t best_len = 0, best_start = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const auto& r = out.rows[i];
    if (r.cce && r.cce->stability == Stability::Stable) {
      ++run;
      if (run > best_len) {
        best_len = run;
        best_start = i + 1 - run;
      }
    } else {
      run = 0;
    }
  }
  if (best_len > 0) {
    out.stable_interval = std::make_pair(out.rows[best_start].p2, out.rows[best_start + best_len - 1].p2);
  }
  return out;
}

std::optional<double> dominant_pair_real(const Spectrum& s) {
  std::optional<double> best;
  for (const auto& z : s) {
    if (z.imag() == 0.0) continue;
    if (!best || z.real() > *best) best = z.real();
  }
  return best;
}

std::optional<HopfResult> hopf_scan(const ModelParams& p, double p2_lo, double p2_hi, double tol) {
  if (!(p2_lo < p2_hi)) throw ArgumentError("hopf_scan: p2_lo must be below p2_hi");

  struct Sample {
    double p2;
    Equilibrium eq;
    double re;  // dominant pair real part, or spectral abscissa for a real spectrum
  };
  std::optional<State> previous;
  double last_valid = p2_lo;
  auto sample = [&](double p2) -> Sample {
    ModelParams local = p;
    local.p2 = p2;
    auto eq = track_cce(local, previous);
    if (!eq) {
      std::ostringstream msg;
      msg.precision(9);
      msg << "coexistence branch lost at p2 = " << p2 << " (last valid p2 = " << last_valid << ")";
      throw BranchLostError(msg.str(), last_valid);
    }
    previous = eq->state;
    last_valid = p2;
    const auto pair = dominant_pair_real(eq->eigenvalues);
    return {p2, *eq, pair ? *pair : spectral_abscissa(eq->eigenvalues)};
  };

  constexpr int kMarch = 32;
  Sample left = sample(p2_lo);
  for (int i = 1; i <= kMarch; ++i) {
    const double p2 = p2_lo + (p2_hi - p2_lo) * static_cast<double>(i) / kMarch;
    Sample right = sample(p2);
    if ((left.re < 0.0) != (right.re < 0.0)) {
      const std::pair<double, double> bracket{left.p2, right.p2};
      State anchor = left.eq.state;
      while (right.p2 - left.p2 > tol) {
        previous = anchor;
        const Sample mid = sample(0.5 * (left.p2 + right.p2));
        if ((mid.re < 0.0) == (left.re < 0.0)) {
          left = mid;
          anchor = mid.eq.state;
        } else {
          right = mid;
        }
      }
      previous = anchor;
      const Sample crit = sample(0.5 * (left.p2 + right.p2));
      const auto& eigs = crit.eq.eigenvalues;
      const auto it = std::find_if(eigs.begin(), eigs.end(),
                                   [](const std::complex<double>& z) { return z.imag() > 0.0; });
      if (it == eigs.end()) return std::nullopt;  // real crossing (fold), not a Hopf point
      HopfResult out;
      out.p2_critical = crit.p2;
      out.eigenvalue = *it;
      out.bracket = bracket;
      out.equilibrium = crit.eq.state;
      return out;
    }
    left = right;
  }
  return std::nullopt;
}

Matrix3 dispersion_matrix(const ModelParams& p, const State& e, double k) {
  const Matrix3 j = jacobian(p, e);
  if (k == 0.0) return j;
  return j - (k * k) * DiffusionMatrix::from(p).matrix();
}

std::vector<double> default_k_grid() {
  std::vector<double> ks;
  ks.reserve(601);
  for (int i = 0; i <= 600; ++i) ks.push_back(0.5 * i);
  return ks;
}

DispersionResult dispersion_relation(const ModelParams& p, const State& e, std::span<const double> k_grid) {
  if (k_grid.empty()) throw ArgumentError("dispersion_relation: empty k grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] >= 0.0) || (i > 0 && !(k_grid[i] > k_grid[i - 1])))
      throw ArgumentError("dispersion_relation: k grid must be nonnegative and strictly increasing");
  }
  const Matrix3 j = jacobian(p, e);
  const Matrix3 d = DiffusionMatrix::from(p).matrix();

  DispersionResult out;
  out.points.resize(k_grid.size());
  const auto n = static_cast<long>(k_grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double k = k_grid[static_cast<std::size_t>(i)];
    const Spectrum s = eigenvalues(k == 0.0 ? j : j - (k * k) * d);
    // Sorted by descending real part; the first entry attains the growth.
    out.points[static_cast<std::size_t>(i)] = {k, s[0].real(), std::abs(s[0].imag())};
  }
  out.growth_max = -std::numeric_limits<double>::infinity();
  for (const auto& pt : out.points) {
    if (pt.growth > out.growth_max) {
      out.growth_max = pt.growth;
      out.k_max = pt.k;
    }
  }
  return out;
}

namespace {

// Polynomials in s = k^2, ascending powers, at most cubic.
using Poly = std::array<double, 4>;

Poly mul(const Poly& a, const Poly& b) {
  Poly r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; i + j < 4; ++j) r[i + j] += a[i] * b[j];
  return r;
}
Poly add(Poly a, const Poly& b) {
  for (std::size_t i = 0; i < 4; ++i) a[i] += b[i];
  return a;
}
Poly sub(Poly a, const Poly& b) {
  for (std::size_t i = 0; i < 4; ++i) a[i] -= b[i];
  return a;
}

double horner(std::span<const double> coeffs, double s) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

}  // namespace

double DispersionPolynomial::eval_a2(double k) const { return horner(a2, k * k); }
double DispersionPolynomial::eval_a1(double k) const { return horner(a1, k * k); }
double DispersionPolynomial::eval_a0(double k) const { return horner(a0, k * k); }

DispersionPolynomial dispersion_polynomial(const ModelParams& p, const State& e) {
  const Matrix3 j = jacobian(p, e);
  const Matrix3 d = DiffusionMatrix::from(p).matrix();
  std::array<Poly, 9> m{};
  for (std::size_t i = 0; i < 9; ++i) m[i] = {j.a[i], -d.a[i], 0.0, 0.0};
  auto at = [&](std::size_t r, std::size_t c) -> const Poly& { return m[3 * r + c]; };

  const Poly trace = add(add(at(0, 0), at(1, 1)), at(2, 2));
  const Poly minors = add(add(sub(mul(at(0, 0), at(1, 1)), mul(at(0, 1), at(1, 0))),
                              sub(mul(at(0, 0), at(2, 2)), mul(at(0, 2), at(2, 0)))),
                          sub(mul(at(1, 1), at(2, 2)), mul(at(1, 2), at(2, 1))));
  const Poly cof0 = sub(mul(at(1, 1), at(2, 2)), mul(at(1, 2), at(2, 1)));
  const Poly cof1 = sub(mul(at(1, 0), at(2, 2)), mul(at(1, 2), at(2, 0)));
  const Poly cof2 = sub(mul(at(1, 0), at(2, 1)), mul(at(1, 1), at(2, 0)));
  const Poly det = add(sub(mul(at(0, 0), cof0), mul(at(0, 1), cof1)), mul(at(0, 2), cof2));

  DispersionPolynomial out;
  out.a2 = {trace[0], trace[1]};
  out.a1 = {-minors[0], -minors[1], -minors[2]};
  out.a0 = det;
  return out;
}

namespace {

template <class Objective>
double bisect_d32(const ModelParams& p, double lo, double hi, double tol, Objective&& objective,
                  const char* what) {
  if (!(lo < hi)) throw ArgumentError(std::string(what) + ": d32_lo must be below d32_hi");
  ModelParams local = p;
  local.d32 = lo;
  const double f_lo = objective(local);
  local.d32 = hi;
  const double f_hi = objective(local);
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg.precision(9);
    msg << what << ": no sign change on [" << lo << ", " << hi << "] (values " << f_lo << ", " << f_hi << ")";
    throw BracketError(msg.str());
  }
  const bool lo_positive = f_lo > 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    local.d32 = mid;
    if ((objective(local) > 0.0) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double critical_d32(const ModelParams& p, const State& e, double d32_lo, double d32_hi,
                    std::span<const double> k_grid, double tol) {
  return bisect_d32(
      p, d32_lo, d32_hi, tol,
      [&](const ModelParams& local) { return dispersion_relation(local, e, k_grid).growth_max; },
      "critical_d32");
}

double determinant_threshold_d32(const ModelParams& p, const State& e, double d32_lo, double d32_hi,
                                 std::span<const double> k_grid, double tol) {
  return bisect_d32(
      p, d32_lo, d32_hi, tol,
      [&](const ModelParams& local) {
        const DispersionPolynomial poly = dispersion_polynomial(local, e);
        double best = -std::numeric_limits<double>::infinity();
        for (double k : k_grid) best = std::max(best, poly.eval_a0(k));
        return best;
      },
      "determinant_threshold_d32");
}

}  // namespace crossdiff
