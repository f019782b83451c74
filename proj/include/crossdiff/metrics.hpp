#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crossdiff/pde.hpp"

namespace crossdiff {

enum class PatternClass { Homogeneous, Spots, Stripes, Mixed };

const char* to_string(PatternClass c);

/// Calibrated on synthetic discs and bands; reported alongside every class hint.
inline constexpr double kSpotRatio = 25.0;
inline constexpr double kStripeRatio = 60.0;
inline constexpr double kHomogeneousVariance = 1e-6;
inline constexpr std::size_t kMinComponentCells = 4;

/// Max over fields and cells of |b - a| / |b.time - a.time|.
/// Throws ArgumentError for mismatched grids or equal times.
double stationarity(const Snapshot& a, const Snapshot& b);

/// Shape statistics of the minority phase after binarizing at the mean.
struct ShapeAnalysis {
  PatternClass cls = PatternClass::Homogeneous;
  std::size_t components = 0;  ///< components of at least kMinComponentCells cells
  double median_ratio = 0.0;   ///< median perimeter^2 / area over those components
};

/// Level-set component analysis of a row-major nx-by-ny field. Cells above the
/// mean form one phase, the rest the other; the phase with fewer cells is split into
/// 4-connected components. Perimeter counts cell edges facing the other phase or
/// the domain boundary. Spots below kSpotRatio, stripes above kStripeRatio, mixed
/// between (and when no component is large enough).
ShapeAnalysis analyse_shapes(std::span<const double> field, std::size_t nx, std::size_t ny);

PatternClass pattern_class(std::span<const double> field, std::size_t nx, std::size_t ny);

struct ProbeSeries {
  std::size_t cell = 0;  ///< nearest grid node
  double x = 0.0, y = 0.0;
  std::vector<double> t;
  std::vector<double> value;
  bool oscillating = false;
  std::optional<double> period;
  double amplitude = 0.0;  ///< mean peak-to-trough swing of the detrended tail
};

/// Time series of one field at the node nearest (x, y) across `snapshots`
/// (y is ignored on 1D grids). The tail (second half in time) is detrended by a
/// least-squares line; the probe oscillates when it shows at least 3 alternating
/// extrema with mean swing above 1e-4. The period uses the peak analysis shared with
/// cycle_metrics. Throws ArgumentError for fewer than 8 snapshots or a point
/// outside the unit domain.
ProbeSeries probe_series(std::span<const Snapshot> snapshots, double x, double y, Field f = Field::V);

struct PatternReport {
  double time = 0.0;
  std::array<FieldStats, 3> stats{};
  std::optional<double> stationarity_rate;  ///< between the last two snapshots
  ShapeAnalysis shape;                      ///< of the v field
  bool oscillating = false;
  std::optional<double> period;
  double probe_x = 0.5, probe_y = 0.5;
};

/// Report on the final snapshot. Stationarity needs two snapshots, oscillation
/// detection at least 8.
PatternReport pattern_report(std::span<const Snapshot> snapshots, double probe_x = 0.5, double probe_y = 0.5);

/// Flat key=value block, one entry per line.
std::string to_key_value(const PatternReport& r);

std::string pattern_csv_header();
std::string pattern_csv_row(const PatternReport& r);

}  // namespace crossdiff
