#include "crossdiff/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "crossdiff/errors.hpp"

namespace crossdiff {

const char* to_string(Field f) {
  switch (f) {
    case Field::U: return "u";
    case Field::V: return "v";
    case Field::W: return "w";
  }
  return "?";
}

FieldGrid FieldGrid::make(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 1) throw ArgumentError("FieldGrid: need nx >= 2 and ny >= 1");
  FieldGrid g;
  g.nx = nx;
  g.ny = ny;
  g.dx = 1.0 / static_cast<double>(nx - 1);
  g.dy = ny > 1 ? 1.0 / static_cast<double>(ny - 1) : 0.0;
  g.u.assign(nx * ny, 0.0);
  g.v.assign(nx * ny, 0.0);
  g.w.assign(nx * ny, 0.0);
  return g;
}

void FieldGrid::validate() const {
  if (nx < 2 || ny < 1) throw ArgumentError("FieldGrid: need nx >= 2 and ny >= 1");
  const std::size_t n = nx * ny;
  if (u.size() != n || v.size() != n || w.size() != n) throw ArgumentError("FieldGrid: array sizes do not match nx*ny");
  if (std::abs(dx * static_cast<double>(nx - 1) - 1.0) > 1e-9) throw ArgumentError("FieldGrid: dx*(nx-1) must be 1");
  if (ny > 1 && std::abs(dy * static_cast<double>(ny - 1) - 1.0) > 1e-9)
    throw ArgumentError("FieldGrid: dy*(ny-1) must be 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(v[i]) || !std::isfinite(w[i]))
      throw ArgumentError("FieldGrid: non-finite value at cell " + std::to_string(i));
  }
}

std::size_t nodes_for_spacing(double dx) {
  if (!(dx > 0.0) || !(dx <= 0.5)) throw ArgumentError("dx must lie in (0, 0.5]");
  const double cells = 1.0 / dx;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * rounded) {
    std::ostringstream msg;
    msg << "dx = " << dx << " does not divide the unit interval";
    throw ArgumentError(msg.str());
  }
  return static_cast<std::size_t>(rounded) + 1;
}

FieldStats field_stats(std::span<const double> values) {
  FieldStats s;
  if (values.empty()) return s;
  s.min = values[0];
  s.max = values[0];
  double sum = 0.0;
  for (double x : values) {
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
    sum += x;
  }
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double x : values) sq += (x - s.mean) * (x - s.mean);
  s.variance = sq / static_cast<double>(values.size());
  return s;
}

double max_stable_dt(const ModelParams& p, double dx, double dy, int dims) {
  double h2 = dx * dx;
  if (dims == 2) h2 = std::min(h2, dy * dy / p.tau_L);
  const double dmax = std::max({p.d11, p.d22, p.d33 + std::abs(p.d32)});
  if (!(dmax > 0.0)) return std::numeric_limits<double>::infinity();
  return 0.2 * h2 / dmax;
}

void SimConfig::validate() const {
  params.validate();
  if (ic_variant < 1 || ic_variant > 3) throw ArgumentError("ic_variant must be 1, 2 or 3");
  if (dims != 1 && dims != 2) throw ArgumentError("dims must be 1 or 2");
  const std::size_t n = nodes_for_spacing(dx);
  if (n < 3) throw ArgumentError("grid needs at least 3 nodes per dimension");
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (!(t_end > 0.0)) throw ArgumentError("t_end must be positive");
  if (workers < 1) throw ArgumentError("workers must be at least 1");
  const double bound = max_stable_dt(params, dx, dx, dims);
  // The bound is inclusive; the slack absorbs rounding in dx^2.
  if (dt > bound * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg.precision(9);
    msg << "dt = " << dt << " exceeds the explicit stability bound " << bound;
    throw ArgumentError(msg.str());
  }
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double t = snapshot_times[i];
    if (!(t >= 0.0 && t <= t_end)) throw ArgumentError("snapshot times must lie in [0, t_end]");
    if (i > 0 && !(t >= snapshot_times[i - 1])) throw ArgumentError("snapshot times must be sorted");
  }
  if (uniform_state && !uniform_state->finite()) throw ArgumentError("uniform initial state is not finite");
}

Snapshot make_snapshot(const FieldGrid& g) {
  Snapshot s;
  s.time = g.t;
  s.grid = g;
  s.stats = {field_stats(g.u), field_stats(g.v), field_stats(g.w)};
  return s;
}

FieldGrid initial_condition(int j, std::size_t nx, std::size_t ny) {
  struct Variant {
    std::array<double, 4> b, x0, y0;
    double x1, y1;
  };
  static constexpr std::array<Variant, 3> kVariants{{
      {{1, 1, 1, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, 0.5, 0.5},
      {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}, 1.0, 1.0},
      {{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, 0.0, 0.0},
  }};
  constexpr double kSigma1 = 0.02;
  constexpr double kSigma2 = 0.06;
  if (j < 1 || j > 3) throw ArgumentError("initial_condition: j must be 1, 2 or 3");
  const Variant& var = kVariants[static_cast<std::size_t>(j - 1)];

  FieldGrid g = FieldGrid::make(nx, ny);
  for (std::size_t r = 0; r < ny; ++r) {
    const double y = ny > 1 ? g.y(r) : var.y1;
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = g.x(i);
      double uw = 0.0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (var.b[k] == 0.0) continue;
        const double dx = x - var.x0[k], dy = y - var.y0[k];
        uw += var.b[k] * std::exp(-(dx * dx + dy * dy) / kSigma1);
      }
      const double ex = x - var.x1, ey = y - var.y1;
      const std::size_t c = g.index(i, r);
      g.u[c] = uw;
      g.w[c] = uw;
      g.v[c] = std::exp(-(ex * ex + ey * ey) / kSigma2);
    }
  }
  return g;
}

FieldGrid uniform_grid(const State& s, std::size_t nx, std::size_t ny) {
  FieldGrid g = FieldGrid::make(nx, ny);
  std::fill(g.u.begin(), g.u.end(), s.u);
  std::fill(g.v.begin(), g.v.end(), s.v);
  std::fill(g.w.begin(), g.w.end(), s.w);
  return g;
}

namespace {

void require_stencil_size(std::size_t nx, std::size_t ny) {
  if (nx < 3) throw ArgumentError("stencil needs nx >= 3");
  if (ny != 1 && ny < 3) throw ArgumentError("stencil needs ny == 1 or ny >= 3");
}

// Row neighbours with mirrored ghosts: row -1 reads row 1, row ny reads row ny-2.
// In 1D both neighbours are the row itself and the y weight is zero.
struct Rows {
  std::size_t below, above;
};
Rows neighbour_rows(std::size_t j, std::size_t ny) {
  if (ny == 1) return {0, 0};
  return {j == 0 ? 1 : j - 1, j == ny - 1 ? ny - 2 : j + 1};
}

struct Stencil {
  const double* f;
  const double* fb;
  const double* fa;
  double cx, cy;

  double operator()(std::size_t i, std::size_t im, std::size_t ip) const {
    const double c = f[i];
    return cx * (f[im] - 2.0 * c + f[ip]) + cy * (fb[i] - 2.0 * c + fa[i]);
  }
};

struct RowScan {
  double min = std::numeric_limits<double>::infinity();
  std::size_t min_cell = 0;
  std::size_t bad_cell = std::numeric_limits<std::size_t>::max();
};

// One explicit step over all rows. `reaction(i, j, state)` returns the local
// reaction term. Rows are independent, so the result does not depend on `workers`.
template <class Reaction>
std::vector<RowScan> advance(const FieldGrid& in, FieldGrid& out, const DiffusionMatrix& d, double tau_L, double dt,
                             const Reaction& reaction, int workers) {
  const std::size_t nx = in.nx, ny = in.ny;
  require_stencil_size(nx, ny);
  if (&in != &out) {
    out.nx = nx;
    out.ny = ny;
    out.dx = in.dx;
    out.dy = in.dy;
    out.u.resize(in.size());
    out.v.resize(in.size());
    out.w.resize(in.size());
  }
  const double cx = 1.0 / (in.dx * in.dx);
  const double cy = ny > 1 ? tau_L / (in.dy * in.dy) : 0.0;
  std::vector<RowScan> scans(ny);

  const auto rows = static_cast<long>(ny);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long jl = 0; jl < rows; ++jl) {
    const auto j = static_cast<std::size_t>(jl);
    const Rows nb = neighbour_rows(j, ny);
    const std::size_t o = j * nx, ob = nb.below * nx, oa = nb.above * nx;
    const Stencil lu{in.u.data() + o, in.u.data() + ob, in.u.data() + oa, cx, cy};
    const Stencil lv{in.v.data() + o, in.v.data() + ob, in.v.data() + oa, cx, cy};
    const Stencil lw{in.w.data() + o, in.w.data() + ob, in.w.data() + oa, cx, cy};
    double* ou = out.u.data() + o;
    double* ov = out.v.data() + o;
    double* ow = out.w.data() + o;
    RowScan& scan = scans[j];

    auto cell = [&](std::size_t i, std::size_t im, std::size_t ip) {
      const State s{lu.f[i], lv.f[i], lw.f[i]};
      const State r = reaction(i, j, s);
      const double dv = lv(i, im, ip);
      const double nu = s.u + dt * (r.u + d.d11 * lu(i, im, ip));
      const double nv = s.v + dt * (r.v + d.d22 * dv);
      const double nw = s.w + dt * (r.w + d.d33 * lw(i, im, ip) + d.d32 * dv);
      ou[i] = nu;
      ov[i] = nv;
      ow[i] = nw;
      const double m = std::min({nu, nv, nw});
      if (m < scan.min) {
        scan.min = m;
        scan.min_cell = o + i;
      }
      if (!std::isfinite(nu + nv + nw) && scan.bad_cell == std::numeric_limits<std::size_t>::max())
        scan.bad_cell = o + i;
    };
    cell(0, 1, 1);
    for (std::size_t i = 1; i + 1 < nx; ++i) cell(i, i - 1, i + 1);
    cell(nx - 1, nx - 2, nx - 2);
  }
  return scans;
}

RowScan reduce(const std::vector<RowScan>& scans) {
  RowScan total;
  for (const auto& s : scans) {
    if (s.min < total.min) {
      total.min = s.min;
      total.min_cell = s.min_cell;
    }
    total.bad_cell = std::min(total.bad_cell, s.bad_cell);
  }
  return total;
}

struct ModelReaction {
  const ModelParams& p;
  State operator()(std::size_t, std::size_t, const State& s) const {
    // Same terms as reaction_rhs; a vanishing denominator shows up as a non-finite value.
    return {p.c * s.v - p.mu1 * s.u + p.p1 * s.u * s.w / (p.g1 + s.w) + p.s1,
            p.r2 * s.v * (1.0 - p.b * s.v) - p.p2 * s.u * s.v / (p.g2 + s.v),
            p.p3 * s.u * s.v / (p.g3 + s.v) - p.mu3 * s.w + p.s3};
  }
};

}  // namespace

std::vector<double> laplacian(std::span<const double> f, std::size_t nx, std::size_t ny, double dx, double dy,
                              double tau_L) {
  require_stencil_size(nx, ny);
  if (f.size() != nx * ny) throw ArgumentError("laplacian: field size does not match nx*ny");
  const double cx = 1.0 / (dx * dx);
  const double cy = ny > 1 ? tau_L / (dy * dy) : 0.0;
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < ny; ++j) {
    const Rows nb = neighbour_rows(j, ny);
    const Stencil s{f.data() + j * nx, f.data() + nb.below * nx, f.data() + nb.above * nx, cx, cy};
    double* o = out.data() + j * nx;
    o[0] = s(0, 1, 1);
    for (std::size_t i = 1; i + 1 < nx; ++i) o[i] = s(i, i - 1, i + 1);
    o[nx - 1] = s(nx - 1, nx - 2, nx - 2);
  }
  return out;
}

StepReport step(const FieldGrid& in, FieldGrid& out, const ModelParams& p, double dt, const StepOptions& opts) {
  if (!(dt > 0.0)) throw ArgumentError("step: dt must be positive");
  if (&in == &out) throw ArgumentError("step: input and output grids must differ");
  if (opts.workers < 1) throw ArgumentError("step: workers must be at least 1");
  const auto scans = advance(in, out, DiffusionMatrix::from(p), p.tau_L, dt, ModelReaction{p}, opts.workers);
  const RowScan total = reduce(scans);
  out.t = in.t + dt;
  if (total.bad_cell != std::numeric_limits<std::size_t>::max()) {
    std::ostringstream msg;
    msg.precision(9);
    msg << "step: non-finite value at cell " << total.bad_cell << " after t = " << in.t;
    throw BlowUpError(msg.str(), in.t, total.bad_cell);
  }
  if (opts.negativity == NegativityPolicy::Abort && total.min < kNegativityFloor) {
    std::ostringstream msg;
    msg.precision(9);
    msg << "step: value " << total.min << " below " << kNegativityFloor << " at cell " << total.min_cell
        << ", t = " << out.t;
    throw NegativityError(msg.str(), out.t, total.min_cell);
  }
  return {total.min, total.min_cell};
}

FieldGrid step(const FieldGrid& in, const ModelParams& p, double dt) {
  FieldGrid out;
  step(in, out, p, dt);
  return out;
}

void step_with(const FieldGrid& in, FieldGrid& out, const DiffusionMatrix& d, double tau_L, double dt,
               const ReactionFn& reaction, int workers) {
  if (&in == &out) throw ArgumentError("step_with: input and output grids must differ");
  if (workers < 1) throw ArgumentError("step_with: workers must be at least 1");
  const double t = in.t;
  auto local = [&](std::size_t i, std::size_t j, const State& s) {
    return reaction ? reaction(in.x(i), in.y(j), t, s) : State{};
  };
  const RowScan total = reduce(advance(in, out, d, tau_L, dt, local, workers));
  out.t = in.t + dt;
  if (total.bad_cell != std::numeric_limits<std::size_t>::max())
    throw BlowUpError("step_with: non-finite value", in.t, total.bad_cell);
}

SimulationResult simulate(const SimConfig& cfg, const std::function<void(const Snapshot&)>& on_snapshot) {
  cfg.validate();
  const std::size_t n = nodes_for_spacing(cfg.dx);
  const std::size_t ny = cfg.dims == 2 ? n : 1;
  FieldGrid cur = cfg.uniform_state ? uniform_grid(*cfg.uniform_state, n, ny) : initial_condition(cfg.ic_variant, n, ny);
  FieldGrid next = cur;

  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  std::vector<std::size_t> marks;
  for (double t : cfg.snapshot_times) marks.push_back(std::min<std::size_t>(steps, std::llround(t / cfg.dt)));
  marks.push_back(steps);
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  SimulationResult result;
  const State first{field_stats(cur.u).min, field_stats(cur.v).min, field_stats(cur.w).min};
  result.min_value = std::min({first.u, first.v, first.w});
  std::size_t mark = 0;
  auto record = [&](const FieldGrid& g) {
    result.snapshots.push_back(make_snapshot(g));
    if (on_snapshot) on_snapshot(result.snapshots.back());
  };
  if (marks[mark] == 0) {
    record(cur);
    ++mark;
  }

  const StepOptions opts{cfg.negativity, cfg.workers};
  for (std::size_t k = 1; k <= steps; ++k) {
    const double h = std::min(cfg.dt, cfg.t_end - cur.t);
    const StepReport rep = step(cur, next, cfg.params, h, opts);
    next.t = (k == steps) ? cfg.t_end : static_cast<double>(k) * cfg.dt;
    if (rep.min_value < result.min_value) {
      result.min_value = rep.min_value;
      result.min_time = next.t;
    }
    if (rep.min_value < kNegativityFloor) result.negativity_warned = true;
    std::swap(cur, next);
    if (mark < marks.size() && marks[mark] == k) {
      record(cur);
      ++mark;
    }
  }
  return result;
}

std::vector<NeumannMode> nearest_neumann_modes(double k, int dims, std::size_t count) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw ArgumentError("nearest_neumann_modes: k must be finite and >= 0");
  if (dims != 1 && dims != 2) throw ArgumentError("nearest_neumann_modes: dims must be 1 or 2");
  const int limit = static_cast<int>(std::ceil(k / std::numbers::pi)) + static_cast<int>(count) + 1;
  std::vector<NeumannMode> modes;
  for (int m = 0; m <= limit; ++m) {
    for (int nn = 0; nn <= (dims == 2 ? limit : 0); ++nn) {
      modes.push_back({m, nn, std::numbers::pi * std::sqrt(static_cast<double>(m * m + nn * nn))});
    }
  }
  std::sort(modes.begin(), modes.end(), [k](const NeumannMode& a, const NeumannMode& b) {
    const double da = std::abs(a.k - k), db = std::abs(b.k - k);
    if (da != db) return da < db;
    return std::tie(a.m, a.n) < std::tie(b.m, b.n);
  });
  if (modes.size() > count) modes.resize(count);
  return modes;
}

}  // namespace crossdiff
