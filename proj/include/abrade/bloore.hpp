#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "abrade/errors.hpp"
#include "abrade/geometry.hpp"

namespace abrade {

// Closed convex marker-point contour, counterclockwise, first/last points
// distinct. reference_area is the enclosed area at initialization and feeds
// the degeneracy guard.
struct Curve {
  std::vector<Vec2> pts;
  double time = 0.0;
  double reference_area = 0.0;
};

struct Measurement {
  double a;
  double r;
  double i_proj;
};

struct PdeSample {
  double time;
  double a;
  double r;
  double i_proj;
};

struct PdeTrajectory {
  std::vector<PdeSample> samples;
  std::vector<std::pair<long, Curve>> snapshots;
};

struct PdeStop {
  double a_min = 0.0;       // stop once a <= a_min (disabled when <= 0)
  double i_proj_min = 0.0;  // stop once i_proj <= i_proj_min (disabled when <= 0)
};

inline double signed_area(const std::vector<Vec2>& pts) {
  double twice = 0.0;
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) twice += cross(pts[i], pts[(i + 1) % n]);
  return 0.5 * twice;
}

inline double chain_perimeter(const std::vector<Vec2>& pts) {
  double p = 0.0;
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) p += norm(pts[(i + 1) % n] - pts[i]);
  return p;
}

inline Vec2 area_centroid(const std::vector<Vec2>& pts) {
  double twice = 0.0;
  Vec2 acc{0.0, 0.0};
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    const double w = cross(p, q);
    twice += w;
    acc = acc + w * (p + q);
  }
  return (1.0 / (3.0 * twice)) * acc;
}

// kappa_i = (x'y'' - y'x'') / (x'^2 + y'^2)^(3/2) with central differences
// in the point index; positive on convex counterclockwise curves. Assumes
// near-uniform spacing, which resampling maintains.
inline std::vector<double> curvature_profile(const Curve& c) {
  const auto& p = c.pts;
  const std::size_t n = p.size();
  std::vector<double> kappa(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& pm = p[(i + n - 1) % n];
    const Vec2& pp = p[(i + 1) % n];
    const Vec2 d1 = 0.5 * (pp - pm);
    const Vec2 d2 = (pp + pm) - 2.0 * p[i];
    const double g = norm(d1);
    kappa[i] = cross(d1, d2) / (g * g * g);
  }
  return kappa;
}

namespace detail {

// Centripetal-free Catmull-Rom with chordal knots (Barry-Goldman pyramid);
// reproduces the input points exactly at the knots.
inline Vec2 catmull_rom(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3, double t0, double t1,
                        double t2, double t3, double t) {
  auto lerp = [](const Vec2& a, const Vec2& b, double ta, double tb, double t) -> Vec2 {
    if (tb - ta <= 0.0) return a;
    const double w = (t - ta) / (tb - ta);
    return (1.0 - w) * a + w * b;
  };
  const Vec2 a1 = lerp(p0, p1, t0, t1, t);
  const Vec2 a2 = lerp(p1, p2, t1, t2, t);
  const Vec2 a3 = lerp(p2, p3, t2, t3, t);
  const Vec2 b1 = lerp(a1, a2, t0, t2, t);
  const Vec2 b2 = lerp(a2, a3, t1, t3, t);
  return lerp(b1, b2, t1, t2, t);
}

inline std::vector<Vec2> resample_uniform(const std::vector<Vec2>& pts, std::size_t m) {
  const std::size_t n = pts.size();
  std::vector<double> s(n + 1);
  s[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) s[i] = s[i - 1] + norm(pts[i % n] - pts[i - 1]);
  const double total = s[n];
  std::vector<Vec2> out(m);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(m);
    while (seg + 1 < n && s[seg + 1] < target) ++seg;
    const Vec2& p1 = pts[seg];
    const Vec2& p2 = pts[(seg + 1) % n];
    const Vec2& p0 = pts[(seg + n - 1) % n];
    const Vec2& p3 = pts[(seg + 2) % n];
    const double t1 = s[seg];
    const double t2 = s[seg + 1];
    const double t0 = t1 - norm(p1 - p0);
    const double t3 = t2 + norm(p3 - p2);
    out[j] = catmull_rom(p0, p1, p2, p3, t0, t1, t2, t3, target);
  }
  return out;
}

}  // namespace detail

// Initial marker contour for a fragment shape. Sharp corners are replaced by
// a small seed fillet so curvature stays finite; the per-segment sampling of
// the exact contour keeps seed arcs resolved, and the first evolution step
// re-establishes globally uniform spacing.
inline Curve init_contour(const RoundedPolygon& p, int point_count, double r_seed = -1.0) {
  if (point_count < 64) throw std::invalid_argument("marker contour needs at least 64 points");
  if (r_seed <= 0.0) r_seed = 0.005 * p.a;
  const RoundedPolygon seeded(p.n, p.a, std::max(p.r, r_seed));
  Curve c;
  c.pts = sample_contour(seeded, point_count);
  c.time = 0.0;
  c.reference_area = signed_area(c.pts);
  if (!(c.reference_area > 0.0)) throw std::invalid_argument("contour must be counterclockwise");
  return c;
}

// Largest stable explicit step: diffusive bound for the curvature term,
// advective bound for the unit drift, with h the mean arclength spacing.
inline double max_stable_dt(const Curve& c, double c_coeff, int w0) {
  const double h = chain_perimeter(c.pts) / static_cast<double>(c.pts.size());
  double dt = std::numeric_limits<double>::infinity();
  if (c_coeff > 0.0) dt = std::min(dt, 0.25 * h * h / c_coeff);
  if (w0 == 1) dt = std::min(dt, 0.25 * h);
  return dt;
}

// One explicit step of v = w0 + c * kappa along the inward normal, followed
// by uniform-arclength resampling.
inline Curve step(const Curve& c, double c_coeff, int w0, double dt) {
  if (w0 != 0 && w0 != 1) throw std::invalid_argument("w0 must be 0 or 1");
  if (c_coeff < 0.0) throw std::invalid_argument("curvature coefficient must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double dtmax = max_stable_dt(c, c_coeff, w0);
  if (dt > dtmax * (1.0 + 1e-12))
    throw step_too_large_error("dt exceeds the stability bound " + std::to_string(dtmax));

  const auto& p = c.pts;
  const std::size_t n = p.size();
  std::vector<Vec2> moved(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& pm = p[(i + n - 1) % n];
    const Vec2& pp = p[(i + 1) % n];
    const Vec2 d1 = 0.5 * (pp - pm);
    const Vec2 d2 = (pp + pm) - 2.0 * p[i];
    const double g = norm(d1);
    const double kappa = cross(d1, d2) / (g * g * g);
    const Vec2 inward{-d1.y / g, d1.x / g};
    moved[i] = p[i] + (dt * (w0 + c_coeff * kappa)) * inward;
  }
  if (signed_area(moved) < 1e-8 * c.reference_area)
    throw degenerate_curve_error("contour area collapsed below 1e-8 of the initial area");

  Curve out;
  out.pts = detail::resample_uniform(moved, n);
  out.time = c.time + dt;
  out.reference_area = c.reference_area;
  return out;
}

// Size, corner radius and isoperimetric ratio of a contour: a = 2 rho_min
// from the area centroid, R = 1 / kappa_max with the global curvature
// maximum, I = 4 pi A / P^2 from the shoelace area and chain perimeter.
inline Measurement measure(const Curve& c) {
  const Vec2 centroid = area_centroid(c.pts);
  double rho_min = std::numeric_limits<double>::infinity();
  for (const Vec2& p : c.pts) rho_min = std::min(rho_min, norm(p - centroid));
  const auto kappa = curvature_profile(c);
  const double kappa_max = *std::max_element(kappa.begin(), kappa.end());
  const double area = signed_area(c.pts);
  const double perim = chain_perimeter(c.pts);
  Measurement m;
  m.a = 2.0 * rho_min;
  m.r = kappa_max > 1e-12 ? 1.0 / kappa_max : std::numeric_limits<double>::infinity();
  m.i_proj = 4.0 * kPi * area / (perim * perim);
  return m;
}

// Runs the flow with dt = 0.9 * dt_max, measuring every snapshot_every
// steps, until a stop threshold is crossed. Degeneracy propagates.
inline PdeTrajectory evolve(Curve c, double c_coeff, int w0, PdeStop stop, int snapshot_every = 50,
                            bool keep_snapshots = false, long max_steps = 50'000'000) {
  if (snapshot_every < 1) throw std::invalid_argument("snapshot cadence must be at least 1");
  if (!(c_coeff > 0.0) && w0 != 1) throw std::invalid_argument("flow without motion: w0 = 0 and c = 0");
  PdeTrajectory out;
  long step_idx = 0;
  auto record = [&]() {
    const Measurement m = measure(c);
    out.samples.push_back({c.time, m.a, m.r, m.i_proj});
    if (keep_snapshots) out.snapshots.emplace_back(step_idx, c);
    return m;
  };
  Measurement m = record();
  while (step_idx < max_steps) {
    if (stop.a_min > 0.0 && m.a <= stop.a_min) break;
    if (stop.i_proj_min > 0.0 && m.i_proj <= stop.i_proj_min) break;
    for (int j = 0; j < snapshot_every && step_idx < max_steps; ++j) {
      c = step(c, c_coeff, w0, 0.9 * max_stable_dt(c, c_coeff, w0));
      ++step_idx;
    }
    m = record();
  }
  return out;
}

}  // namespace abrade
