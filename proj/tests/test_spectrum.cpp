#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <random>

#include "crossdiff/polynomial.hpp"
#include "crossdiff/spectrum.hpp"
#include "properties.hpp"

using namespace crossdiff;

namespace {

bool by_parts(std::complex<double> a, std::complex<double> b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

}  // namespace

TEST_CASE("3x3 eigenvalues against Eigen") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    Matrix3 a;
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) e(i, j) = a(i, j) = n(rng);
    auto mine = eigenvalues(a);
    Eigen::EigenSolver<Eigen::Matrix3d> es(e);
    std::array<std::complex<double>, 3> ref{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
    std::sort(mine.begin(), mine.end(), by_parts);
    std::sort(ref.begin(), ref.end(), by_parts);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mine[i] - ref[i]) < 1e-9 * (1.0 + std::abs(ref[i])));
  }
}

TEST_CASE("repeated and diagonal spectra") {
  Matrix3 a;
  a(0, 0) = a(1, 1) = a(2, 2) = -2.0;
  for (auto z : eigenvalues(a)) CHECK(std::abs(z - std::complex<double>(-2.0)) < 1e-9);
  Matrix3 b;
  b(0, 0) = 1.0;
  b(1, 1) = -3.0;
  b(2, 2) = 0.5;
  auto s = eigenvalues(b);
  std::sort(s.begin(), s.end(), by_parts);
  CHECK(s[0].real() == doctest::Approx(-3.0));
  CHECK(s[2].real() == doctest::Approx(1.0));
}

TEST_CASE("classification depends only on the real parts") {
  using C = std::complex<double>;
  std::array<C, 3> s{C(-1, 2), C(-1, -2), C(-0.5)};
  CHECK(classify_spectrum(s) == Stability::Stable);
  std::reverse(s.begin(), s.end());
  CHECK(classify_spectrum(s) == Stability::Stable);
  s[1] = C(1e-3, 0);
  CHECK(classify_spectrum(s) == Stability::Unstable);
  s[1] = C(1e-12, 4);
  CHECK(classify_spectrum(s) == Stability::Marginal);
  CHECK(spectral_abscissa(s) == 1e-12);
}

TEST_CASE("polynomial evaluation and roots") {
  const std::array<double, 4> c{-6.0, 11.0, -6.0, 1.0};  // (x-1)(x-2)(x-3)
  CHECK(poly_eval(c, 2.5) == doctest::Approx(-0.375));
  CHECK(poly_derivative_eval(c, 2.0) == doctest::Approx(-1.0));
  auto r = poly_roots(c);
  std::sort(r.begin(), r.end(), by_parts);
  REQUIRE(r.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r[i] - std::complex<double>(i + 1.0)) < 1e-10);
}

TEST_CASE("Routh array of a Hurwitz quintic") {
  const std::array<double, 6> a{1, 5, 10, 10, 5, 1};
  const RouthColumn col = routh_array(a);
  REQUIRE(col.entries.size() == 6);
  for (double e : col.entries) CHECK(e > 0.0);
  CHECK(col.sign_changes == 0);
  CHECK_FALSE(col.ambiguous);
}

TEST_CASE("Routh array with a zero pivot") {
  // x^3 + x^2 + x + 1 = (x + 1)(x^2 + 1): roots on the axis
  const std::array<double, 4> a{1, 1, 1, 1};
  const RouthColumn col = routh_array(a);
  CHECK(std::find(col.substituted.begin(), col.substituted.end(), true) != col.substituted.end());
  // x^5 - 1 has two right half-plane pairs plus x = 1
  const std::array<double, 6> b{-1, 0, 0, 0, 0, 1};
  const RouthColumn c2 = routh_array(b);
  CHECK(std::find(c2.substituted.begin(), c2.substituted.end(), true) != c2.substituted.end());
}

TEST_CASE("Routh sign changes against companion roots") {
  const auto r = testing::routh_vs_companion(20);
  INFO(r.detail);
  CHECK(r.pass);
  const auto more = testing::routh_vs_companion(500, 99);
  INFO(more.detail);
  CHECK(more.pass);
}
