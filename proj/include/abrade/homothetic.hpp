#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "abrade/geometry.hpp"

namespace abrade {

enum class Stability { Stable, Unstable };

inline const char* to_string(Stability s) { return s == Stability::Stable ? "STABLE" : "UNSTABLE"; }

// One solution of the mixed self-dual homothetic condition: from the ray
// R = alpha * a, diluted self-dual abrasion with probability p evolves the
// fragment self-similarly.
struct BranchPoint {
  int n;
  double p;
  double alpha;
  Stability stability;
};

// F(alpha, p) = [C + p + p K (1/(2 alpha) - 1)] / (2 C) - alpha. Roots in
// alpha coincide with the quadratic 2 C a^2 - (C + p - p K) a - p K / 2 = 0.
inline double homothetic_residual(int n, double alpha, double p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const PolygonConstants pc = polygon_constants(n);
  return (pc.c + p + p * pc.k * (0.5 / alpha - 1.0)) / (2.0 * pc.c) - alpha;
}

// d(residual)/d(alpha). The ray dynamics is d(alpha)/d(-ln a) = -residual,
// so a root is attracting exactly when this slope is positive there.
inline double homothetic_residual_slope(int n, double alpha, double p) {
  const PolygonConstants pc = polygon_constants(n);
  return -p * pc.k / (4.0 * pc.c * alpha * alpha) - 1.0;
}

// All homothetic rays for dilution p, ascending in alpha, restricted to the
// feasible band (0, 1/2]. Empty above the fold.
inline std::vector<std::pair<double, Stability>> solve_alpha(int n, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("dilution probability must be in (0, 1]");
  const PolygonConstants pc = polygon_constants(n);
  const double qa = 2.0 * pc.c;
  const double qb = -(pc.c + p - p * pc.k);
  const double qc = -0.5 * p * pc.k;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  double roots[2] = {q / qa, qc / q};

  std::vector<std::pair<double, Stability>> out;
  for (double root : roots) {
    if (!(root > 0.0 && root <= 0.5 + 1e-12)) continue;
    // Newton polish on the residual keeps |F| at roundoff level.
    for (int it = 0; it < 3; ++it) {
      const double f = homothetic_residual(n, root, p);
      const double df = homothetic_residual_slope(n, root, p);
      if (df == 0.0) break;
      root -= f / df;
    }
    const Stability st = homothetic_residual_slope(n, root, p) > 0.0 ? Stability::Stable : Stability::Unstable;
    out.emplace_back(root, st);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (out.size() == 2 && std::abs(out[0].first - out[1].first) < 1e-14) out.pop_back();
  return out;
}

// Largest dilution probability with a homothetic solution: the smaller
// positive root of the discriminant (C + p - p K)^2 + 4 C p K = 0 read as a
// quadratic in p. Algebraically this is -C / (1 + sqrt(K))^2.
inline double fold_point(int n) {
  const PolygonConstants pc = polygon_constants(n);
  const double qa = (1.0 - pc.k) * (1.0 - pc.k);
  const double qb = 2.0 * pc.c * (1.0 + pc.k);
  const double qc = pc.c * pc.c;
  const double disc = qb * qb - 4.0 * qa * qc;  // = 16 C^2 K >= 0
  const double sq = std::sqrt(std::max(disc, 0.0));
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  const double p1 = q / qa;
  const double p2 = qc / q;
  return std::min(p1, p2);
}

// Every branch point of the diagram over the given fold counts and dilution
// grid; ready for CSV emission.
inline std::vector<BranchPoint> branch_diagram(const std::vector<int>& n_values, const std::vector<double>& p_grid) {
  for (std::size_t i = 1; i < p_grid.size(); ++i)
    if (!(p_grid[i] > p_grid[i - 1])) throw std::invalid_argument("dilution grid must be ascending");
  for (double p : p_grid)
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("dilution grid values must be in (0, 1]");
  std::vector<BranchPoint> out;
  for (int n : n_values)
    for (double p : p_grid)
      for (const auto& [alpha, st] : solve_alpha(n, p)) out.push_back({n, p, alpha, st});
  return out;
}

}  // namespace abrade
