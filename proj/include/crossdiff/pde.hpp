#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "crossdiff/kinetics.hpp"
#include "crossdiff/stability.hpp"

namespace crossdiff {

enum class Field { U = 0, V = 1, W = 2 };

const char* to_string(Field f);

/// Concentration fields on the unit interval (ny = 1) or the unit square.
///
/// Nodes sit on the boundary: x_i = i dx with dx (nx - 1) = 1, likewise in y. Storage
/// is row-major with rows of constant y: value(i, j) = data[j * nx + i]. For 1D grids
/// dy is 0.
struct FieldGrid {
  std::size_t nx = 0;
  std::size_t ny = 1;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> u, v, w;
  double t = 0.0;

  /// Zero-filled grid on the unit domain.
  static FieldGrid make(std::size_t nx, std::size_t ny);

  std::size_t size() const { return nx * ny; }
  int dims() const { return ny > 1 ? 2 : 1; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  double x(std::size_t i) const { return static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return static_cast<double>(j) * dy; }

  std::vector<double>& field(Field f) { return f == Field::U ? u : (f == Field::V ? v : w); }
  const std::vector<double>& field(Field f) const { return f == Field::U ? u : (f == Field::V ? v : w); }
  State at(std::size_t cell) const { return {u[cell], v[cell], w[cell]}; }

  /// Throws ArgumentError on inconsistent sizes or spacings.
  void validate() const;
};

/// Number of nodes on [0, 1] for spacing dx; throws ArgumentError unless 1/dx is an
/// integer of at least 2.
std::size_t nodes_for_spacing(double dx);

struct FieldStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

FieldStats field_stats(std::span<const double> values);

enum class NegativityPolicy { Abort, Warn };

inline constexpr double kNegativityFloor = -1e-8;

struct SimConfig {
  ModelParams params;
  int ic_variant = 1;  ///< Gaussian initial data j in {1, 2, 3}
  int dims = 2;
  double dx = 0.01;
  double dt = 1e-3;
  double t_end = 200.0;
  std::vector<double> snapshot_times;  ///< sorted, within [0, t_end]; t_end is always recorded
  NegativityPolicy negativity = NegativityPolicy::Abort;
  int workers = 1;
  std::optional<State> uniform_state;  ///< homogeneous initial data, overrides ic_variant

  void validate() const;
};

struct Snapshot {
  double time = 0.0;
  FieldGrid grid;
  std::array<FieldStats, 3> stats{};
};

Snapshot make_snapshot(const FieldGrid& g);

/// Gaussian initial data: u = w = sum_k b_j(k) exp(-|x - c_k|^2 / 0.02),
/// v = exp(-|x - c_v|^2 / 0.06). On 1D grids the y coordinate is fixed at the tumor
/// center y.
FieldGrid initial_condition(int j, std::size_t nx, std::size_t ny);

FieldGrid uniform_grid(const State& s, std::size_t nx, std::size_t ny);

/// d2f/dx2 + tau_L d2f/dy2 with a 5-point stencil and mirrored ghost nodes
/// (zero normal derivative). Requires at least 3 nodes per active dimension.
std::vector<double> laplacian(std::span<const double> f, std::size_t nx, std::size_t ny, double dx, double dy,
                              double tau_L = 1.0);

/// Explicit-Euler bound 0.2 min(dx^2, dy^2 / tau_L) / max(d11, d22, d33 + |d32|).
double max_stable_dt(const ModelParams& p, double dx, double dy, int dims);

struct StepOptions {
  NegativityPolicy negativity = NegativityPolicy::Abort;
  int workers = 1;
};

struct StepReport {
  double min_value = 0.0;  ///< smallest value over all three fields after the step
  std::size_t min_cell = 0;
};

/// One forward-Euler step of the full reaction-diffusion system, reading `in` and
/// writing `out` (resized as needed). Throws BlowUpError on a non-finite value and,
/// under the abort policy, NegativityError when a value drops below -1e-8.
StepReport step(const FieldGrid& in, FieldGrid& out, const ModelParams& p, double dt, const StepOptions& opts = {});

FieldGrid step(const FieldGrid& in, const ModelParams& p, double dt);

/// Local reaction term used by `step_with`: (x, y, t, U) -> dU/dt without diffusion.
using ReactionFn = std::function<State(double, double, double, const State&)>;

/// Forward-Euler step with a caller-supplied reaction term, e.g. none or a
/// manufactured source. Same stencil and boundary treatment as `step`; no
/// negativity check.
void step_with(const FieldGrid& in, FieldGrid& out, const DiffusionMatrix& d, double tau_L, double dt,
               const ReactionFn& reaction, int workers = 1);

struct SimulationResult {
  std::vector<Snapshot> snapshots;
  double min_value = 0.0;  ///< smallest value seen over the run
  double min_time = 0.0;
  bool negativity_warned = false;
};

/// Runs `step` from the configured initial data to t_end, recording snapshots at
/// the requested times and at t_end. `on_snapshot` is called as each one is taken.
SimulationResult simulate(const SimConfig& cfg, const std::function<void(const Snapshot&)>& on_snapshot = {});

/// Neumann eigenmode of the unit interval/square, k^2 = pi^2 (m^2 + n^2).
struct NeumannMode {
  int m = 0;
  int n = 0;
  double k = 0.0;
};

/// The `count` admissible modes whose wavenumber is closest to k (n = 0 in 1D).
std::vector<NeumannMode> nearest_neumann_modes(double k, int dims, std::size_t count = 3);

}  // namespace crossdiff
