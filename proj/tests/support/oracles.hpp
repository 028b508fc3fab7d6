#pragma once

// Sampling-based oracles for the closed-form geometry, shared by the unit
// and acceptance suites. Everything here is deliberately independent of the
// closed forms it checks.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "abrade/geometry.hpp"

namespace abrade::testing {

// A rounded polygon is the Minkowski sum of the sharp polygon with inradius
// a/2 - r and a disk of radius r: a point lies inside iff its distance to
// that inner polygon is at most r.
struct MembershipOracle {
  int n;
  double r;
  std::vector<Vec2> verts;

  MembershipOracle(int n_, double a, double r_) : n(n_), r(r_) {
    const double d = (0.5 * a - r) / std::cos(kPi / n);
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * kPi * k / n;
      verts.push_back({d * std::cos(th), d * std::sin(th)});
    }
  }

  bool contains(Vec2 q) const {
    bool inside = true;
    double best = 1e300;
    for (int k = 0; k < n; ++k) {
      const Vec2 p1 = verts[k];
      const Vec2 p2 = verts[(k + 1) % n];
      const Vec2 e = p2 - p1;
      if (cross(e, q - p1) < 0.0) inside = false;
      const double t = std::clamp(dot(q - p1, e) / dot(e, e), 0.0, 1.0);
      best = std::min(best, norm(q - (p1 + t * e)));
    }
    return inside || best <= r;
  }
};

inline double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) len += norm(pts[(i + 1) % pts.size()] - pts[i]);
  return len;
}

struct McArea {
  double estimate;
  double sigma;
};

inline McArea monte_carlo_area(int n, double a, double r, long samples, unsigned seed) {
  const MembershipOracle oracle(n, a, r);
  const double w = (0.5 * a - r) / std::cos(kPi / n) + r;  // circumradius
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-w, w);
  long hits = 0;
  for (long i = 0; i < samples; ++i)
    if (oracle.contains({u(rng), u(rng)})) ++hits;
  const double box = 4.0 * w * w;
  const double p = static_cast<double>(hits) / samples;
  return {p * box, box * std::sqrt(p * (1.0 - p) / samples)};
}

}  // namespace abrade::testing
