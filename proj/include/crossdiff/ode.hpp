#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crossdiff/kinetics.hpp"

namespace crossdiff {

/// Sampled solution of dU/dt = F(U).
struct Trajectory {
  std::vector<double> t;
  std::vector<State> x;
  ModelParams params;

  std::size_t size() const { return t.size(); }
};

/// Fixed-step classical RK4 from t = 0 to t_end. Every `record_every`-th step is
/// stored, plus the initial and final states. Throws ArgumentError for dt <= 0,
/// t_end <= 0 or a non-finite start, and BlowUpError (carrying the last finite time)
/// if the state stops being finite.
Trajectory integrate(const ModelParams& p, const State& u0, double t_end, double dt = 1e-3,
                     std::size_t record_every = 1);

/// Single RK4 step.
State rk4_step(const ModelParams& p, const State& x, double dt);

struct CycleMetrics {
  double period = 0.0;
  State amplitude;  ///< max - min per component over the analysed tail
  State mean;
};

/// Periodic-orbit diagnostics on the part of `tr` after `transient_fraction` of its
/// duration. Period is the mean spacing of successive maxima of v (peak times refined
/// by parabolic interpolation); requires at least 3 maxima whose spacing has a
/// coefficient of variation below 5%. Returns nullopt for a tail that settles to a
/// point, including damped oscillations whose peak-to-trough swing shrinks by more
/// than 5% across the tail. Throws ArgumentError if the tail has fewer than 8 samples.
std::optional<CycleMetrics> cycle_metrics(const Trajectory& tr, double transient_fraction = 0.5);

/// Shared peak analysis used by cycle_metrics and the probe-series detector.
struct PeakAnalysis {
  std::vector<double> peak_times;
  std::vector<double> swings;  ///< peak-to-trough swing of each full cycle
  std::optional<double> period;
};

PeakAnalysis analyse_peaks(std::span<const double> t, std::span<const double> y);

}  // namespace crossdiff
