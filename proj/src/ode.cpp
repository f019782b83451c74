#include "crossdiff/ode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crossdiff/errors.hpp"

namespace crossdiff {

State rk4_step(const ModelParams& p, const State& x, double dt) {
  const State k1 = reaction_rhs(p, x);
  const State k2 = reaction_rhs(p, x + (0.5 * dt) * k1);
  const State k3 = reaction_rhs(p, x + (0.5 * dt) * k2);
  const State k4 = reaction_rhs(p, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const ModelParams& p, const State& u0, double t_end, double dt, std::size_t record_every) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ArgumentError("integrate: dt and t_end must be positive");
  if (!u0.finite()) throw ArgumentError("integrate: initial state is not finite");
  if (record_every == 0) record_every = 1;

  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  Trajectory tr;
  tr.params = p;
  tr.t.reserve(steps / record_every + 2);
  tr.x.reserve(steps / record_every + 2);
  tr.t.push_back(0.0);
  tr.x.push_back(u0);

  State x = u0;
  double t = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = std::min(dt, t_end - t);
    State next;
    try {
      next = rk4_step(p, x, h);
    } catch (const DomainError& e) {
      throw BlowUpError(std::string("integrate: ") + e.what(), t);
    }
    if (!next.finite()) {
      std::ostringstream msg;
      msg << "integrate: state became non-finite after t = " << t;
      throw BlowUpError(msg.str(), t);
    }
    x = next;
    t = (n == steps) ? t_end : static_cast<double>(n) * dt;
    if (n % record_every == 0 || n == steps) {
      tr.t.push_back(t);
      tr.x.push_back(x);
    }
  }
  return tr;
}

PeakAnalysis analyse_peaks(std::span<const double> t, std::span<const double> y) {
  PeakAnalysis out;
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) idx.push_back(i);
  }
  for (std::size_t i : idx) {
    // Vertex of the parabola through the three samples around the maximum.
    const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double denom = (t0 - t1) * (t0 - t2) * (t1 - t2);
    double tp = t1;
    if (denom != 0.0) {
      const double a = (t2 * (y1 - y0) + t1 * (y0 - y2) + t0 * (y2 - y1)) / denom;
      const double b = (t2 * t2 * (y0 - y1) + t1 * t1 * (y2 - y0) + t0 * t0 * (y1 - y2)) / denom;
      if (a < 0.0) tp = std::clamp(-b / (2.0 * a), t0, t2);
    }
    out.peak_times.push_back(tp);
  }
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const auto first = y.begin() + static_cast<std::ptrdiff_t>(idx[k]);
    const auto last = y.begin() + static_cast<std::ptrdiff_t>(idx[k + 1]);
    const double trough = *std::min_element(first, last);
    out.swings.push_back(y[idx[k]] - trough);
  }
  if (out.peak_times.size() >= 3) {
    std::vector<double> gaps;
    for (std::size_t k = 1; k < out.peak_times.size(); ++k) gaps.push_back(out.peak_times[k] - out.peak_times[k - 1]);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    var /= static_cast<double>(gaps.size());
    if (mean > 0.0 && std::sqrt(var) / mean < 0.05) out.period = mean;
  }
  return out;
}

std::optional<CycleMetrics> cycle_metrics(const Trajectory& tr, double transient_fraction) {
  if (tr.size() < 2) throw ArgumentError("cycle_metrics: trajectory too short");
  if (!(transient_fraction >= 0.0 && transient_fraction < 1.0))
    throw ArgumentError("cycle_metrics: transient fraction must lie in [0, 1)");
  const double t_cut = tr.t.front() + transient_fraction * (tr.t.back() - tr.t.front());
  const auto start =
      static_cast<std::size_t>(std::lower_bound(tr.t.begin(), tr.t.end(), t_cut) - tr.t.begin());
  const std::size_t n = tr.size() - start;
  if (n < 8) throw ArgumentError("cycle_metrics: fewer than 8 samples after the transient cut");

  const std::span<const double> t(tr.t.data() + start, n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = tr.x[start + i].v;

  const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
  if (*vmax - *vmin <= 1e-9 * std::max(1.0, std::abs(*vmax))) return std::nullopt;

  const PeakAnalysis peaks = analyse_peaks(t, v);
  if (!peaks.period) return std::nullopt;
  if (peaks.swings.size() >= 2 && peaks.swings.back() < 0.95 * peaks.swings.front()) return std::nullopt;

  // Whole cycles only: from the first to the last sampled maximum.
  std::size_t first = 0, last = n - 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
      if (first == 0) first = i;
      last = i;
    }
  }
  CycleMetrics m;
  m.period = *peaks.period;
  State lo = tr.x[start + first], hi = lo;
  State integral;
  for (std::size_t i = first; i <= last; ++i) {
    const State& s = tr.x[start + i];
    for (std::size_t c = 0; c < 3; ++c) {
      lo[c] = std::min(lo[c], s[c]);
      hi[c] = std::max(hi[c], s[c]);
    }
    if (i > first) integral += (0.5 * (t[i] - t[i - 1])) * (s + tr.x[start + i - 1]);
  }
  m.amplitude = hi - lo;
  m.mean = integral * (1.0 / (t[last] - t[first]));
  return m;
}

}  // namespace crossdiff
