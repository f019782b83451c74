#include "crossdiff/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "crossdiff/errors.hpp"

namespace crossdiff {

double poly_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double poly_derivative_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * coeffs[i];
  return acc;
}

std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == 0.0) --n;
  if (n == 0) throw ArgumentError("poly_roots: zero polynomial");
  const std::size_t degree = n - 1;
  if (degree == 0) return {};
  const double lead = coeffs[degree];
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(degree),
                                               static_cast<Eigen::Index>(degree));
  for (std::size_t j = 0; j < degree; ++j) comp(0, static_cast<Eigen::Index>(j)) = -coeffs[degree - 1 - j] / lead;
  for (std::size_t i = 1; i < degree; ++i)
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  const auto ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

namespace {

struct RouthPass {
  std::vector<double> column;
  std::vector<bool> substituted;
};

int count_sign_changes(const std::vector<double>& column) {
  int changes = 0;
  for (std::size_t i = 1; i < column.size(); ++i) {
    if ((column[i - 1] > 0.0) != (column[i] > 0.0)) ++changes;
  }
  return changes;
}

RouthPass build_routh(const std::vector<double>& high, double eps) {
  const std::size_t n = high.size() - 1;
  const std::size_t width = n / 2 + 1;
  std::vector<std::vector<double>> rows(n + 1, std::vector<double>(width + 1, 0.0));
  for (std::size_t j = 0; 2 * j <= n; ++j) rows[0][j] = high[2 * j];
  for (std::size_t j = 0; 2 * j + 1 <= n; ++j) rows[1][j] = high[2 * j + 1];

  RouthPass out;
  out.substituted.assign(n + 1, false);

  auto fix_row = [&](std::size_t i) {
    auto& row = rows[i];
    const bool all_zero = std::all_of(row.begin(), row.end(), [](double x) { return x == 0.0; });
    if (all_zero && i > 0) {
      // Auxiliary polynomial of the previous row has degree m = n - (i - 1) in s,
      // with powers m, m-2, ...; its derivative replaces the vanished row.
      const auto& prev = rows[i - 1];
      const double m = static_cast<double>(n - (i - 1));
      for (std::size_t j = 0; j < width; ++j) row[j] = prev[j] * (m - 2.0 * static_cast<double>(j));
      out.substituted[i] = true;
    }
    if (row[0] == 0.0) {
      row[0] = eps;
      out.substituted[i] = true;
    }
  };

  fix_row(0);
  if (n >= 1) fix_row(1);
  for (std::size_t i = 2; i <= n; ++i) {
    const auto& pp = rows[i - 2];
    const auto& prev = rows[i - 1];
    for (std::size_t j = 0; j < width; ++j) {
      const double lhs = prev[0] * pp[j + 1];
      const double rhs = pp[0] * prev[j + 1];
      double num = lhs - rhs;
      if (std::abs(num) <= 1e-12 * (std::abs(lhs) + std::abs(rhs))) num = 0.0;
      rows[i][j] = num / prev[0];
    }
    fix_row(i);
  }
  out.column.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.column[i] = rows[i][0];
  return out;
}

}  // namespace

RouthColumn routh_array(std::span<const double> coeffs) {
  if (coeffs.size() < 2) throw ArgumentError("routh_array: degree must be at least 1");
  if (coeffs.back() == 0.0) throw ArgumentError("routh_array: leading coefficient is zero (degree degeneracy)");
  std::vector<double> high(coeffs.rbegin(), coeffs.rend());
  double scale = 0.0;
  for (double c : high) scale = std::max(scale, std::abs(c));
  const double eps = 1e-9 * scale;

  const RouthPass plus = build_routh(high, eps);
  const RouthPass minus = build_routh(high, -eps);

  RouthColumn out;
  out.entries = plus.column;
  out.substituted = plus.substituted;
  out.sign_changes = count_sign_changes(plus.column);
  out.ambiguous = out.sign_changes != count_sign_changes(minus.column);
  return out;
}

}  // namespace crossdiff
