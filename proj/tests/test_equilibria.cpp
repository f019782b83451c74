#include <doctest.h>

#include <cmath>
#include <random>

#include "crossdiff/equilibria.hpp"
#include "crossdiff/errors.hpp"
#include "crossdiff/stability.hpp"
#include "properties.hpp"

using namespace crossdiff;

namespace {

const Equilibrium* near(const std::vector<Equilibrium>& eqs, State s, double tol) {
  for (const auto& e : eqs)
    if ((e.state - s).max_norm() < tol) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("untreated coexistence equilibrium") {
  const ModelParams p = preset("untreated");
  const auto eqs = cce_solve(p);
  const Equilibrium* e = near(eqs, {0.592878, 0.372148, 0.295647}, 1e-4);
  REQUIRE(e != nullptr);
  CHECK(e->kind == EquilibriumKind::CCE);
  CHECK(reaction_rhs(p, e->state).max_norm() < 1e-10);
  CHECK(e->stability == Stability::Stable);
  CHECK(eqs.back().state == e->state);
}

TEST_CASE("treated coexistence equilibrium") {
  const ModelParams p = preset("treated");
  const auto eqs = cce_solve(p);
  const Equilibrium* e = near(eqs, {0.586645, 0.3542, 0.296099}, 1e-3);
  REQUIRE(e != nullptr);
  CHECK(reaction_rhs(p, e->state).max_norm() < 1e-10);
}

TEST_CASE("cancer-free equilibrium") {
  SUBCASE("no therapy gives the origin") {
    const auto e = cfe(preset("untreated"));
    REQUIRE(e);
    CHECK(e->state == State{0.0, 0.0, 0.0});
  }
  SUBCASE("treated closed form") {
    const ModelParams p = preset("treated");
    const auto e = cfe(p);
    REQUIRE(e);
    CHECK(e->state.w == doctest::Approx(0.0036).epsilon(1e-6));
    // exact rational evaluation of -s1 (s3 + g1 mu3) / (p1 s3 - s3 mu1 - g1 mu1 mu3)
    CHECK(e->state.u == doctest::Approx(0.020973717186985076).epsilon(1e-12));
    CHECK(e->state.v == 0.0);
    CHECK(reaction_rhs(p, e->state).max_norm() < 1e-10);
  }
  SUBCASE("positive constraint gives none") {
    ModelParams p = preset("treated");
    p.p1 = 1.0;
    p.s3 = 1.0;
    p.mu1 = 0.1;
    p.g1 = 1.0;
    p.mu3 = 0.001;
    p.s1 = 0.01;
    CHECK_FALSE(cfe(p).has_value());
  }
}

TEST_CASE("quintic coefficients") {
  ModelParams p = preset("untreated");
  SUBCASE("leading coefficient") { CHECK(quintic_coeffs(p).a[5] == doctest::Approx(14.57).epsilon(0.01 / 14.57)); }
  SUBCASE("untreated constant term is linear in p2") {
    for (double p2 : {0.1, 0.5, 2.0}) {
      p.p2 = p2;
      const double a0 = quintic_coeffs(p).a[0];
      CHECK(a0 / p2 == doctest::Approx(-0.0186).epsilon(0.0005 / 0.0186));
      CHECK(std::abs(a0 / p2 - -0.02) <= 0.005);
      CHECK(a0 == doctest::Approx(-p.g2 * p.g3 * p2 * p.r2 * p.g1 * p.mu1 * p.mu3).epsilon(1e-13));
    }
  }
  SUBCASE("treated constant term is quadratic in p2") {
    p = preset("treated");
    auto a0 = [&](double p2) {
      p.p2 = p2;
      return quintic_coeffs(p).a[0];
    };
    const double f0 = a0(0.0), f1 = a0(1.0), f2 = a0(2.0);
    const double quad = (f2 - 2.0 * f1 + f0) / 2.0;
    const double lin = f1 - f0 - quad;
    CHECK(std::abs(f0) < 0.0005);
    CHECK(std::abs(lin - -0.02) <= 0.005);
    CHECK(std::abs(quad - 0.004) <= 0.0005);
  }
  SUBCASE("roots of the returned equilibria") {
    for (const char* name : {"untreated", "treated"}) {
      p = preset(name);
      const auto q = quintic_coeffs(p);
      for (const auto& e : cce_solve(p)) CHECK(std::abs(q(e.state.v)) < 1e-8);
    }
  }
}

TEST_CASE("coexistence roots respect v < 1/b and positivity") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> j(0.5, 1.5);
  for (int n = 0; n < 200; ++n) {
    ModelParams p = preset(n % 2 ? "treated" : "untreated");
    p.b *= 2.0 * j(rng);
    p.c *= j(rng);
    p.p2 *= 4.0 * j(rng);
    for (const auto& e : cce_solve(p)) {
      CHECK(e.state.v < 1.0 / p.b);
      CHECK(e.state.v > 0.0);
      CHECK(e.state.u > 0.0);
      CHECK(e.state.w > 0.0);
      CHECK(reaction_rhs(p, e.state).max_norm() < 1e-10);
    }
  }
}

TEST_CASE("quintic roots against dense sweep") {
  const auto r = testing::quintic_vs_sweep(100);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("Routh first column") {
  QuinticCoeffs q;
  q.a = {1, 5, 10, 10, 5, 0};
  CHECK_THROWS_AS(routh_first_column(q), ArgumentError);
  q.a = {1, 5, 10, 10, 5, 1};
  CHECK(routh_first_column(q).sign_changes == 0);
  CHECK(routh_existence_rule(quintic_coeffs(preset("untreated")), Scenario::Untreated));
}

TEST_CASE("existence region") {
  const ModelParams p = preset("untreated");
  SUBCASE("base point") {
    const std::vector<double> p2{0.5}, c{0.25};
    CHECK(existence_region_scan(p, p2, c, Scenario::Untreated).at(0, 0));
  }
  SUBCASE("treated rule needs a0 < 0") {
    ModelParams t = preset("treated");
    t.p2 = 8.0;
    REQUIRE(quintic_coeffs(t).a[0] > 0.0);
    const std::vector<double> p2{8.0}, c{0.25};
    CHECK_FALSE(existence_region_scan(t, p2, c, Scenario::Treated).at(0, 0));
  }
  SUBCASE("marked points have a coexistence root") {
    // c = 0 makes a0 vanish identically in the treated case; the grid starts above it
    std::vector<double> p2, c;
    for (int i = 0; i < 20; ++i) {
      p2.push_back(0.01 * std::pow(1000.0, i / 19.0));
      c.push_back(0.05 * (i + 1));
    }
    for (const char* name : {"untreated", "treated"}) {
      const ModelParams base = preset(name);
      const auto sc = std::string(name) == "treated" ? Scenario::Treated : Scenario::Untreated;
      const auto g = existence_region_scan(base, p2, c, sc);
      int marked = 0;
      for (std::size_t i = 0; i < p2.size(); ++i)
        for (std::size_t k = 0; k < c.size(); ++k) {
          if (!g.at(i, k)) continue;
          ++marked;
          ModelParams q = base;
          q.p2 = p2[i];
          q.c = c[k];
          CAPTURE(p2[i]);
          CAPTURE(c[k]);
          CHECK_FALSE(cce_solve(q).empty());
        }
      CHECK(marked > 0);
    }
  }
  SUBCASE("grid errors") {
    const std::vector<double> empty, one{1.0}, down{2.0, 1.0};
    CHECK_THROWS_AS(existence_region_scan(p, empty, one, Scenario::Untreated), ArgumentError);
    CHECK_THROWS_AS(existence_region_scan(p, down, one, Scenario::Untreated), ArgumentError);
  }
}

TEST_CASE("numerical coefficient lists") {
  // Printed a_i as sums of terms coef * c^i * p2^j; each term is held to half a unit
  // in its last printed digit.
  struct Term {
    double coef, half_unit;
    int c_pow, p2_pow;
  };
  using Coeff = std::vector<Term>;
  const std::array<Coeff, 6> untreated{{
      {{-0.02, 0.005, 0, 1}},
      {{0.15, 0.005, 0, 0}, {-18.72, 0.005, 0, 1}, {1.11, 0.005, 1, 2}},
      {{2.62, 0.005, 0, 0}, {-166.81, 0.005, 0, 1}, {2.78, 0.005, 1, 1}, {1111.11, 0.005, 1, 2}},
      {{8.89, 0.005, 0, 0}, {185.56, 0.005, 0, 1}, {25.0, 0.5, 1, 1}},
      {{-26.23, 0.005, 0, 0}, {-27.78, 0.005, 1, 1}},
      {{14.57, 0.005, 0, 0}},
  }};
  const std::array<Coeff, 6> treated{{
      {{-0.02, 0.005, 0, 1}, {0.004, 0.0005, 0, 2}},
      {{0.15, 0.005, 0, 0}, {-18.7, 0.05, 0, 1}, {3.89, 0.005, 0, 2}, {1.11, 0.005, 1, 2}},
      {{2.62, 0.005, 0, 0}, {-166.63, 0.005, 0, 1}, {2.78, 0.005, 1, 1}, {1111.31, 0.005, 1, 2}},
      {{8.89, 0.005, 0, 0}, {185.35, 0.005, 0, 1}, {25.0, 0.5, 1, 1}},
      {{-26.23, 0.005, 0, 0}, {-27.78, 0.005, 1, 1}},
      {{14.57, 0.005, 0, 0}},
  }};
  for (auto [name, printed] : {std::pair{"untreated", &untreated}, {"treated", &treated}}) {
    for (double c : {0.05, 0.25, 1.0}) {
      for (double p2 : {0.1, 0.5, 2.0}) {
        ModelParams p = preset(name);
        p.c = c;
        p.p2 = p2;
        const auto q = quintic_coeffs(p);
        for (std::size_t i = 0; i < 6; ++i) {
          double want = 0.0, tol = 0.0;
          for (const Term& t : (*printed)[i]) {
            const double m = std::pow(c, t.c_pow) * std::pow(p2, t.p2_pow);
            want += t.coef * m;
            tol += t.half_unit * m;
          }
          CAPTURE(name);
          CAPTURE(i);
          CAPTURE(c);
          CAPTURE(p2);
          CHECK(std::abs(q.a[i] - want) <= tol);
        }
      }
    }
  }
}
