#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crossdiff/equilibria.hpp"
#include "crossdiff/errors.hpp"
#include "crossdiff/ode.hpp"

using namespace crossdiff;

TEST_CASE("fixed point stays put") {
  const ModelParams p = preset("untreated");
  const State e = cce_solve(p).back().state;
  const Trajectory tr = integrate(p, e, 100.0, 1e-3, 1000);
  for (const auto& x : tr.x) CHECK((x - e).max_norm() < 1e-8);
}

TEST_CASE("trajectory invariants") {
  const Trajectory tr = integrate(preset("untreated"), {0.1, 0.3, 1.0}, 10.0, 1e-3, 7);
  CHECK(tr.t.size() == tr.x.size());
  CHECK(tr.t.front() == 0.0);
  CHECK(tr.t.back() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.t[i] > tr.t[i - 1]);
  CHECK(tr.params == preset("untreated"));
}

TEST_CASE("fourth-order step halving") {
  const ModelParams p = preset("untreated");
  const State u0{0.1, 0.3, 1.0};
  auto end = [&](double dt) { return integrate(p, u0, 4.0, dt, 1).x.back(); };
  // mu3 dt must be well below 1 before the error constant settles; at dt = 0.02 the ratio is ~26
  const State a = end(0.005), b = end(0.0025), c = end(0.00125);
  const double ratio = (a - b).max_norm() / (b - c).max_norm();
  CAPTURE(ratio);
  CHECK(ratio > 16.0 * 0.7);
  CHECK(ratio < 16.0 * 1.3);
}

TEST_CASE("default step is converged on the presets") {
  for (const char* name : {"untreated", "treated"}) {
    const ModelParams p = preset(name);
    const State a = integrate(p, {0.1, 0.3, 1.0}, 50.0, 1e-3, 1000).x.back();
    const State b = integrate(p, {0.1, 0.3, 1.0}, 50.0, 5e-4, 1000).x.back();
    CHECK((a - b).max_norm() < 1e-6);
  }
}

TEST_CASE("rk4 step on a linear decay") {
  ModelParams p = preset("untreated");
  // at v = 0, w = 0 and s = 0 only the effector decay acts: u' = -mu1 u
  const State x = rk4_step(p, {1.0, 0.0, 0.0}, 0.1);
  const double h = -p.mu1 * 0.1;
  CHECK(x.u == doctest::Approx(1.0 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24).epsilon(1e-15));
  CHECK(x.v == 0.0);
}

TEST_CASE("synthetic sinusoid") {
  Trajectory tr;
  for (int i = 0; i <= 6000; ++i) {
    const double t = 0.01 * i;
    tr.t.push_back(t);
    tr.x.push_back({0.0, std::sin(2.0 * std::numbers::pi * t / 3.0), 0.0});
  }
  const auto m = cycle_metrics(tr, 0.5);
  REQUIRE(m);
  CHECK(m->period == doctest::Approx(3.0).epsilon(0.01));
  CHECK(m->amplitude.v == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("cycle metrics errors") {
  Trajectory tr;
  tr.t = {0.0};
  tr.x = {{1, 1, 1}};
  CHECK_THROWS_AS(cycle_metrics(tr), ArgumentError);
}

TEST_CASE("limit cycle above the Hopf point") {
  ModelParams p = preset("untreated");
  p.p2 = 0.55;
  const auto a = cycle_metrics(integrate(p, {0.1, 0.3, 1.0}, 1000.0, 1e-3, 10), 0.5);
  const auto b = cycle_metrics(integrate(p, {1.5, 2.0, 0.5}, 1000.0, 1e-3, 10), 0.5);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->amplitude.v > 0.01);
  CHECK(std::abs(a->period - b->period) <= 0.02 * a->period);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a->amplitude[i] - b->amplitude[i]) <= 0.02 * a->amplitude[i]);
}

TEST_CASE("below the Hopf point the orbit settles") {
  ModelParams p = preset("untreated");
  p.p2 = 0.4;
  const Trajectory tr = integrate(p, {0.1, 0.3, 1.0}, 500.0, 1e-3, 10);
  CHECK_FALSE(cycle_metrics(tr, 0.5).has_value());
  CHECK((tr.x.back() - cce_solve(p).back().state).max_norm() < 1e-4);
}

TEST_CASE("nonnegative on the presets") {
  for (const char* name : {"untreated", "treated"}) {
    const Trajectory tr = integrate(preset(name), {0.1, 0.3, 1.0}, 200.0, 1e-3, 10);
    for (const auto& x : tr.x) CHECK((x.u >= 0.0 && x.v >= 0.0 && x.w >= 0.0));
  }
}

TEST_CASE("blow-up reports the time") {
  const ModelParams p = preset("untreated");
  CHECK_THROWS_AS(integrate(p, {0.1, -0.1, 1.0}, 1.0), BlowUpError);
  CHECK_THROWS_AS(integrate(p, {0.1, 0.3, 1.0}, 1.0, 0.0), ArgumentError);
  ModelParams wild = p;
  wild.b = 1e-300;
  wild.r2 = 50.0;
  try {
    integrate(wild, {0.0, 1.0, 0.0}, 100.0, 0.05);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() < 100.0);
  }
}

TEST_CASE("peak analysis") {
  std::vector<double> t, y;
  for (int i = 0; i < 1000; ++i) {
    t.push_back(0.1 * i);
    y.push_back(std::cos(t.back()));
  }
  const auto pa = analyse_peaks(t, y);
  REQUIRE(pa.period);
  CHECK(*pa.period == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
  CHECK(pa.peak_times.size() >= 14);
}
