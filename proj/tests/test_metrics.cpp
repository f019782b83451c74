#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "crossdiff/errors.hpp"
#include "crossdiff/metrics.hpp"

using namespace crossdiff;

namespace {

constexpr std::size_t kN = 101;

std::vector<double> discs(double radius) {
  std::vector<double> f(kN * kN, 0.0);
  for (std::size_t j = 0; j < kN; ++j)
    for (std::size_t i = 0; i < kN; ++i)
      for (double cx = 12.0; cx < 100.0; cx += 25.0)
        for (double cy = 12.0; cy < 100.0; cy += 25.0)
          if (std::hypot(i - cx, j - cy) <= radius) f[j * kN + i] = 1.0;
  return f;
}

std::vector<double> bands(std::size_t width, std::size_t period) {
  std::vector<double> f(kN * kN, 0.0);
  for (std::size_t j = 0; j < kN; ++j)
    for (std::size_t i = 0; i < kN; ++i)
      if (i % period < width) f[j * kN + i] = 1.0;
  return f;
}

Snapshot snap_1d(double t, std::vector<double> v) {
  Snapshot s;
  s.time = t;
  s.grid = FieldGrid::make(v.size(), 1);
  s.grid.t = t;
  s.grid.v = std::move(v);
  s.grid.u.assign(s.grid.size(), 1.0);
  s.grid.w.assign(s.grid.size(), 1.0);
  return s;
}

std::vector<Snapshot> sinusoid(double period, double shift, double amp = 0.1) {
  std::vector<Snapshot> out;
  for (int k = 0; k <= 400; ++k) {
    const double t = 0.1 * k + shift;
    std::vector<double> v(11);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = 1.0 + amp * std::sin(2.0 * std::numbers::pi * (t - shift) / period + 0.3 * i);
    out.push_back(snap_1d(t, v));
  }
  return out;
}

}  // namespace

TEST_CASE("stationarity") {
  const Snapshot a = snap_1d(1.0, {0.0, 1.0, 2.0});
  SUBCASE("identical fields") { CHECK(stationarity(a, snap_1d(2.0, {0.0, 1.0, 2.0})) == 0.0); }
  SUBCASE("rate, symmetry and scaling with the interval") {
    const Snapshot b = snap_1d(2.0, {0.0, 1.5, 2.0});
    const Snapshot c = snap_1d(3.0, {0.0, 1.5, 2.0});
    CHECK(stationarity(a, b) == doctest::Approx(0.5));
    CHECK(stationarity(b, a) == stationarity(a, b));
    CHECK(stationarity(a, c) == doctest::Approx(stationarity(a, b) / 2.0));
    CHECK(stationarity(a, b) >= 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(stationarity(a, snap_1d(1.0, {0.0, 1.0, 2.0})), ArgumentError);
    CHECK_THROWS_AS(stationarity(a, snap_1d(2.0, {0.0, 1.0, 2.0, 3.0})), ArgumentError);
  }
}

TEST_CASE("pattern classes on synthetic geometry") {
  CHECK(pattern_class(std::vector<double>(kN * kN, 0.7), kN, kN) == PatternClass::Homogeneous);
  const auto d = analyse_shapes(discs(6.0), kN, kN);
  CHECK(d.cls == PatternClass::Spots);
  CHECK(d.components == 16);
  CHECK(d.median_ratio < kSpotRatio);
  const auto b = analyse_shapes(bands(5, 15), kN, kN);
  CHECK(b.cls == PatternClass::Stripes);
  CHECK(b.median_ratio > kStripeRatio);
  CHECK(pattern_class(discs(10.0), kN, kN) == PatternClass::Spots);
  CHECK_THROWS_AS(analyse_shapes(std::vector<double>(10, 0.0), kN, kN), ArgumentError);
}

TEST_CASE("homogeneous iff variance below threshold") {
  std::vector<double> f(kN * kN, 1.0);
  f[0] = 1.0 + 1e-3;  // variance ~1e-10
  CHECK(pattern_class(f, kN, kN) == PatternClass::Homogeneous);
  f[0] = 1.5;
  CHECK(pattern_class(f, kN, kN) != PatternClass::Homogeneous);
}

TEST_CASE("pattern class ignores offset and positive scale") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> noise(kN * kN);
  for (auto& x : noise) x = n(rng);
  for (const auto& f : {discs(6.0), bands(5, 15), bands(20, 30), noise}) {
    const PatternClass ref = pattern_class(f, kN, kN);
    for (auto [shift, scale] : {std::pair{3.0, 1.0}, {0.0, 7.5}, {-2.0, 0.01}}) {
      std::vector<double> g(f);
      for (auto& x : g) x = x * scale + shift;
      CHECK(pattern_class(g, kN, kN) == ref);
    }
  }
}

TEST_CASE("probe oscillation on a synthetic sinusoid") {
  const auto snaps = sinusoid(4.0, 0.0);
  const ProbeSeries p = probe_series(snaps, 0.5, 0.5);
  CHECK(p.cell == 5);
  CHECK(p.oscillating);
  REQUIRE(p.period);
  CHECK(*p.period == doctest::Approx(4.0).epsilon(0.02));
  CHECK(p.amplitude == doctest::Approx(0.2).epsilon(0.05));

  const ProbeSeries shifted = probe_series(sinusoid(4.0, 123.4), 0.5, 0.5);
  REQUIRE(shifted.period);
  CHECK(*shifted.period == doctest::Approx(*p.period).epsilon(1e-9));
}

TEST_CASE("stationary probe is not oscillating") {
  const ProbeSeries p = probe_series(sinusoid(4.0, 0.0, 0.0), 0.2, 0.0);
  CHECK_FALSE(p.oscillating);
  CHECK_FALSE(p.period.has_value());
  const ProbeSeries tiny = probe_series(sinusoid(4.0, 0.0, 1e-6), 0.2, 0.0);
  CHECK_FALSE(tiny.oscillating);
}

TEST_CASE("probe errors") {
  const auto snaps = sinusoid(4.0, 0.0);
  CHECK_THROWS_AS(probe_series(snaps, 1.5, 0.5), ArgumentError);
  CHECK_THROWS_AS(probe_series(snaps, 0.5, -0.1), ArgumentError);
  CHECK_THROWS_AS(probe_series(std::span(snaps).first(7), 0.5, 0.5), ArgumentError);
}

TEST_CASE("pattern report") {
  const auto snaps = sinusoid(4.0, 0.0);
  const PatternReport r = pattern_report(snaps);
  CHECK(r.oscillating);
  REQUIRE(r.stationarity_rate);
  CHECK(*r.stationarity_rate > 1e-3);
  const std::string kv = to_key_value(r);
  CHECK(kv.find("pattern_class=") != std::string::npos);
  CHECK(kv.find("oscillating=true") != std::string::npos);
  CHECK(kv.find("pattern_thresholds=25,60") != std::string::npos);
  const std::string row = pattern_csv_row(r);
  const std::string header = pattern_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
  CHECK_THROWS_AS(pattern_report(std::vector<Snapshot>{}), ArgumentError);
}
