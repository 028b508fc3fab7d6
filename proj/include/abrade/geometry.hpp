#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "abrade/errors.hpp"

namespace abrade {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Trigonometric constants of the regular n-gon the model reuses everywhere.
//   phi      interior angle pi(n-2)/n
//   s        sin(phi/2) = cos(pi/n), in [1/2, 1)
//   c        1 - 1/s, negative for every finite n
//   k        n tan(pi/n)/pi, the perimeter-averaged curvature weight;
//            equals 2 cot(phi/2)/(pi - phi)
//   tan_pi_n tan(pi/n) = cot(phi/2)
struct PolygonConstants {
  double phi;
  double s;
  double c;
  double k;
  double tan_pi_n;
};

inline PolygonConstants polygon_constants(int n) {
  if (n < 3) throw std::invalid_argument("fold count must be at least 3, got " + std::to_string(n));
  PolygonConstants pc;
  pc.phi = kPi * (n - 2) / n;
  pc.s = std::cos(kPi / n);  // sin(phi/2) with phi/2 = pi/2 - pi/n
  pc.c = 1.0 - 1.0 / pc.s;
  pc.tan_pi_n = std::tan(kPi / n);
  pc.k = n * pc.tan_pi_n / kPi;
  return pc;
}

// Contour coloring: blue below the effective abrader radius, red on the
// circle line, yellow in between.
enum class Phase { BelowAbrader, Between, Circle };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::BelowAbrader: return "BELOW_ABRADER";
    case Phase::Between: return "BETWEEN";
    case Phase::Circle: return "CIRCLE";
  }
  return "?";
}

inline Phase phase_from_string(const std::string& s) {
  if (s == "BELOW_ABRADER") return Phase::BelowAbrader;
  if (s == "BETWEEN") return Phase::Between;
  if (s == "CIRCLE") return Phase::Circle;
  throw std::invalid_argument("unknown phase tag: " + s);
}

// Closed-form contour functionals of an n-fold rounded polygon with
// inscribed-circle diameter a and corner radius r. These are plain formulas
// and are also evaluated on infeasible (r, a) combinations when a trajectory
// is continued past the circle line, so they do not validate.
inline double perimeter(int n, double a, double r) {
  const PolygonConstants pc = polygon_constants(n);
  return 2.0 * n * pc.tan_pi_n * (0.5 * a - r) + 2.0 * kPi * r;
}

inline double area(int n, double a, double r) {
  const PolygonConstants pc = polygon_constants(n);
  return n * pc.tan_pi_n * (0.25 * a * a - r * r) + kPi * r * r;
}

inline double isoperimetric_ratio(int n, double a, double r) {
  const double p = perimeter(n, a, r);
  return 4.0 * kPi * area(n, a, r) / (p * p);
}

// Circle detection wins over the abrader comparison so that the terminal
// red state is reported as such even when r_star exceeds a/2.
inline Phase classify_phase(int n, double a, double r, double r_star) {
  (void)n;
  if (std::abs(r - 0.5 * a) <= 1e-9 * a) return Phase::Circle;
  if (r < r_star) return Phase::BelowAbrader;
  return Phase::Between;
}

// Validated shape state. Fillet radii beyond a/2 (plus roundoff slack) are
// geometrically infeasible and rejected.
struct RoundedPolygon {
  int n;
  double a;
  double r;
  PolygonConstants constants;

  RoundedPolygon(int n_, double a_, double r_) : n(n_), a(a_), r(r_), constants(polygon_constants(n_)) {
    if (!(a > 0.0)) throw std::invalid_argument("inscribed diameter must be positive");
    if (r < 0.0) throw std::invalid_argument("corner radius must be non-negative");
    if (r > 0.5 * a + feasibility_tolerance(a))
      throw std::invalid_argument("corner radius " + std::to_string(r) + " exceeds a/2: geometrically infeasible");
  }

  static double feasibility_tolerance(double a) { return 1e-12 * a; }

  bool is_circle() const { return std::abs(r - 0.5 * a) <= 1e-9 * a; }
  double perimeter() const { return abrade::perimeter(n, a, r); }
  double area() const { return abrade::area(n, a, r); }
  double isoperimetric_ratio() const { return abrade::isoperimetric_ratio(n, a, r); }
  Phase classify(double r_star) const { return classify_phase(n, a, r, r_star); }
};

namespace detail {

struct ContourSegment {
  bool arc;
  double len;
  // side
  Vec2 p0;
  Vec2 dir;  // unit
  // arc
  Vec2 center;
  double u0;
  double du;
};

inline std::vector<ContourSegment> contour_segments(const RoundedPolygon& p) {
  const int n = p.n;
  const double r = p.r;
  const double d = (0.5 * p.a - r) / std::cos(kPi / n);  // fillet-center distance
  std::vector<ContourSegment> segs;
  segs.reserve(2 * n);
  auto unit = [](double ang) { return Vec2{std::cos(ang), std::sin(ang)}; };
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * kPi * k / n;
    const double th_next = 2.0 * kPi * (k + 1) / n;
    const Vec2 ck = d * unit(th);
    const Vec2 cnext = d * unit(th_next);

    ContourSegment arc;
    arc.arc = true;
    arc.center = ck;
    arc.u0 = th - kPi / n;
    arc.du = 2.0 * kPi / n;
    arc.len = r * arc.du;
    segs.push_back(arc);

    ContourSegment side;
    side.arc = false;
    side.p0 = ck + r * unit(th + kPi / n);
    const Vec2 p1 = cnext + r * unit(th_next - kPi / n);
    const Vec2 delta = p1 - side.p0;
    side.len = norm(delta);
    side.dir = side.len > 0.0 ? (1.0 / side.len) * delta : Vec2{0.0, 0.0};
    segs.push_back(side);
  }
  return segs;
}

// Distributes m points over the segments proportionally to length but never
// lets a fillet arc fall below a handful of points: the curvature estimate
// of the seeded PDE contour needs resolved arcs.
inline std::vector<int> allocate_points(const std::vector<ContourSegment>& segs, int m) {
  const int nseg = static_cast<int>(segs.size());
  std::vector<int> count(nseg, 0);
  const double zero_len = 1e-14;
  double total = 0.0;
  for (const auto& s : segs)
    if (s.len > zero_len) total += s.len;

  // Largest-remainder split of m over the nonzero segments.
  std::vector<std::pair<double, int>> frac;
  int assigned = 0;
  for (int i = 0; i < nseg; ++i) {
    if (segs[i].len <= zero_len) continue;
    const double share = m * segs[i].len / total;
    count[i] = static_cast<int>(share);
    assigned += count[i];
    frac.emplace_back(share - count[i], i);
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int j = 0; assigned < m; ++j) {
    ++count[frac[j % frac.size()].second];
    ++assigned;
  }
  // Every nonzero segment carries at least one point.
  for (int i = 0; i < nseg; ++i) {
    if (segs[i].len <= zero_len || count[i] > 0) continue;
    int donor = -1;
    for (int j = 0; j < nseg; ++j)
      if (count[j] > 1 && (donor < 0 || count[j] > count[donor])) donor = j;
    if (donor < 0) break;
    --count[donor];
    ++count[i];
  }
  // Arc boost: steal from the most populated sides.
  const int arc_target = 8;
  for (int i = 0; i < nseg; ++i) {
    if (!segs[i].arc || segs[i].len <= zero_len) continue;
    while (count[i] < arc_target) {
      int donor = -1;
      for (int j = 0; j < nseg; ++j)
        if (!segs[j].arc && count[j] > 2 && (donor < 0 || count[j] > count[donor])) donor = j;
      if (donor < 0) break;
      --count[donor];
      ++count[i];
    }
  }
  return count;
}

}  // namespace detail

// Samples m points counterclockwise on the exact contour, centered on the
// centroid. The first and last points are distinct; closure is implied.
inline std::vector<Vec2> sample_contour(const RoundedPolygon& p, int m) {
  if (m < 3 * p.n)
    throw std::invalid_argument("contour sampling needs at least 3n points, got " + std::to_string(m));
  const auto segs = detail::contour_segments(p);
  const auto count = detail::allocate_points(segs, m);
  std::vector<Vec2> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    for (int j = 0; j < count[i]; ++j) {
      const double t = static_cast<double>(j) / count[i];
      if (s.arc) {
        const double u = s.u0 + t * s.du;
        pts.push_back(s.center + p.r * Vec2{std::cos(u), std::sin(u)});
      } else {
        pts.push_back(s.p0 + (t * s.len) * s.dir);
      }
    }
  }
  return pts;
}

}  // namespace abrade
