#include "crossdiff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crossdiff/errors.hpp"
#include "crossdiff/format.hpp"
#include "crossdiff/ode.hpp"

namespace crossdiff {

const char* to_string(PatternClass c) {
  switch (c) {
    case PatternClass::Homogeneous: return "homogeneous";
    case PatternClass::Spots: return "spots";
    case PatternClass::Stripes: return "stripes";
    case PatternClass::Mixed: return "mixed";
  }
  return "?";
}

double stationarity(const Snapshot& a, const Snapshot& b) {
  const FieldGrid& ga = a.grid;
  const FieldGrid& gb = b.grid;
  if (ga.nx != gb.nx || ga.ny != gb.ny || ga.u.size() != gb.u.size() || ga.v.size() != gb.v.size() ||
      ga.w.size() != gb.w.size())
    throw ArgumentError("stationarity: snapshots are on different grids");
  const double dt = std::abs(b.time - a.time);
  if (!(dt > 0.0)) throw ArgumentError("stationarity: snapshots must have different times");
  double diff = 0.0;
  for (Field f : {Field::U, Field::V, Field::W}) {
    const auto& x = ga.field(f);
    const auto& y = gb.field(f);
    for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
  }
  return diff / dt;
}

ShapeAnalysis analyse_shapes(std::span<const double> field, std::size_t nx, std::size_t ny) {
  if (field.size() != nx * ny || nx == 0) throw ArgumentError("analyse_shapes: field size does not match nx*ny");
  ShapeAnalysis out;
  const FieldStats st = field_stats(field);
  if (!(st.variance >= kHomogeneousVariance)) return out;

  std::vector<char> phase(field.size());
  std::size_t above = 0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    phase[i] = field[i] > st.mean ? 1 : 0;
    above += phase[i];
  }
  const char minority = above <= field.size() - above ? 1 : 0;

  std::vector<int> label(field.size(), -1);
  std::vector<double> ratios;
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t seed = 0; seed < field.size(); ++seed) {
    if (phase[seed] != minority || label[seed] >= 0) continue;
    std::size_t area = 0, perimeter = 0;
    stack.push_back(seed);
    label[seed] = next;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      ++area;
      const std::size_t i = c % nx, j = c / nx;
      const std::array<std::pair<bool, std::size_t>, 4> nb{{
          {i > 0, c - 1},
          {i + 1 < nx, c + 1},
          {j > 0, c - nx},
          {j + 1 < ny, c + nx},
      }};
      for (const auto& [inside, n] : nb) {
        if (!inside || phase[n] != minority) {
          ++perimeter;
        } else if (label[n] < 0) {
          label[n] = next;
          stack.push_back(n);
        }
      }
    }
    ++next;
    if (area >= kMinComponentCells)
      ratios.push_back(static_cast<double>(perimeter * perimeter) / static_cast<double>(area));
  }

  out.components = ratios.size();
  if (ratios.empty()) {
    out.cls = PatternClass::Mixed;
    return out;
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size() / 2;
  out.median_ratio = ratios.size() % 2 ? ratios[m] : 0.5 * (ratios[m - 1] + ratios[m]);
  if (out.median_ratio < kSpotRatio)
    out.cls = PatternClass::Spots;
  else if (out.median_ratio > kStripeRatio)
    out.cls = PatternClass::Stripes;
  else
    out.cls = PatternClass::Mixed;
  return out;
}

PatternClass pattern_class(std::span<const double> field, std::size_t nx, std::size_t ny) {
  return analyse_shapes(field, nx, ny).cls;
}

ProbeSeries probe_series(std::span<const Snapshot> snapshots, double x, double y, Field f) {
  if (snapshots.size() < 8) throw ArgumentError("probe_series: need at least 8 snapshots");
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
    throw ArgumentError("probe_series: probe point outside the unit domain");
  const FieldGrid& g0 = snapshots.front().grid;
  const auto i = static_cast<std::size_t>(std::llround(x / g0.dx));
  const std::size_t j = g0.ny > 1 ? static_cast<std::size_t>(std::llround(y / g0.dy)) : 0;

  ProbeSeries out;
  out.cell = g0.index(std::min(i, g0.nx - 1), std::min(j, g0.ny - 1));
  out.x = g0.x(std::min(i, g0.nx - 1));
  out.y = g0.ny > 1 ? g0.y(std::min(j, g0.ny - 1)) : y;
  for (const Snapshot& s : snapshots) {
    if (s.grid.nx != g0.nx || s.grid.ny != g0.ny) throw ArgumentError("probe_series: snapshots on different grids");
    if (!out.t.empty() && !(s.time > out.t.back())) throw ArgumentError("probe_series: snapshot times must increase");
    out.t.push_back(s.time);
    out.value.push_back(s.grid.field(f)[out.cell]);
  }

  // Tail: second half in time, detrended by a least-squares line.
  const double t_cut = 0.5 * (out.t.front() + out.t.back());
  const auto start = static_cast<std::size_t>(std::lower_bound(out.t.begin(), out.t.end(), t_cut) - out.t.begin());
  const std::size_t n = out.t.size() - start;
  if (n < 3) return out;
  std::vector<double> tt(out.t.begin() + static_cast<std::ptrdiff_t>(start), out.t.end());
  std::vector<double> yy(out.value.begin() + static_cast<std::ptrdiff_t>(start), out.value.end());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mt += tt[k];
    my += yy[k];
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (tt[k] - mt) * (yy[k] - my);
    sxx += (tt[k] - mt) * (tt[k] - mt);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  for (std::size_t k = 0; k < n; ++k) yy[k] -= my + slope * (tt[k] - mt);

  // Alternating extrema; runs of the same kind keep the most extreme value.
  std::vector<double> ext;
  int last_kind = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    int kind = 0;
    if (yy[k] > yy[k - 1] && yy[k] >= yy[k + 1]) kind = 1;
    if (yy[k] < yy[k - 1] && yy[k] <= yy[k + 1]) kind = -1;
    if (kind == 0) continue;
    if (kind == last_kind) {
      if ((kind > 0 && yy[k] > ext.back()) || (kind < 0 && yy[k] < ext.back())) ext.back() = yy[k];
    } else {
      ext.push_back(yy[k]);
      last_kind = kind;
    }
  }
  if (ext.size() >= 2) {
    double swing = 0.0;
    for (std::size_t k = 1; k < ext.size(); ++k) swing += std::abs(ext[k] - ext[k - 1]);
    out.amplitude = swing / static_cast<double>(ext.size() - 1);
  }
  out.oscillating = ext.size() >= 3 && out.amplitude > 1e-4;
  if (out.oscillating) out.period = analyse_peaks(tt, yy).period;
  return out;
}

PatternReport pattern_report(std::span<const Snapshot> snapshots, double probe_x, double probe_y) {
  if (snapshots.empty()) throw ArgumentError("pattern_report: no snapshots");
  const Snapshot& last = snapshots.back();
  PatternReport r;
  r.time = last.time;
  r.stats = last.stats;
  r.probe_x = probe_x;
  r.probe_y = probe_y;
  if (snapshots.size() >= 2) r.stationarity_rate = stationarity(snapshots[snapshots.size() - 2], last);
  r.shape = analyse_shapes(last.grid.v, last.grid.nx, last.grid.ny);
  if (snapshots.size() >= 8) {
    const ProbeSeries ps = probe_series(snapshots, probe_x, probe_y, Field::V);
    r.oscillating = ps.oscillating;
    r.period = ps.period;
  }
  return r;
}

std::string to_key_value(const PatternReport& r) {
  std::ostringstream o;
  o << "time=" << fmt(r.time) << '\n';
  for (std::size_t f = 0; f < 3; ++f) {
    const char* name = to_string(static_cast<Field>(f));
    const FieldStats& s = r.stats[f];
    o << name << ".min=" << fmt(s.min) << '\n'
      << name << ".max=" << fmt(s.max) << '\n'
      << name << ".mean=" << fmt(s.mean) << '\n'
      << name << ".variance=" << fmt(s.variance) << '\n';
  }
  o << "stationarity_rate=" << (r.stationarity_rate ? fmt(*r.stationarity_rate) : "nan") << '\n'
    << "pattern_class=" << to_string(r.shape.cls) << '\n'
    << "pattern_components=" << r.shape.components << '\n'
    << "pattern_median_ratio=" << fmt(r.shape.median_ratio) << '\n'
    << "pattern_thresholds=" << fmt(kSpotRatio) << ',' << fmt(kStripeRatio) << '\n'
    << "probe=" << fmt(r.probe_x) << ',' << fmt(r.probe_y) << '\n'
    << "oscillating=" << (r.oscillating ? "true" : "false") << '\n'
    << "period=" << (r.period ? fmt(*r.period) : "nan") << '\n';
  return o.str();
}

std::string pattern_csv_header() {
  return "time,u_min,u_max,u_mean,u_variance,v_min,v_max,v_mean,v_variance,w_min,w_max,w_mean,w_variance,"
         "stationarity_rate,pattern_class,median_ratio,oscillating,period";
}

std::string pattern_csv_row(const PatternReport& r) {
  std::ostringstream o;
  o << fmt(r.time);
  for (const FieldStats& s : r.stats) o << ',' << fmt(s.min) << ',' << fmt(s.max) << ',' << fmt(s.mean) << ',' << fmt(s.variance);
  o << ',' << (r.stationarity_rate ? fmt(*r.stationarity_rate) : "nan") << ',' << to_string(r.shape.cls) << ','
    << fmt(r.shape.median_ratio) << ',' << (r.oscillating ? 1 : 0) << ',' << (r.period ? fmt(*r.period) : "nan");
  return o.str();
}

}  // namespace crossdiff
