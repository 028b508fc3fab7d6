#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "abrade/csv.hpp"
#include "abrade/geometry.hpp"
#include "abrade/numfmt.hpp"

namespace abrade::svg {

inline const char* phase_color(Phase p) {
  switch (p) {
    case Phase::BelowAbrader: return "#3b6fd4";  // blue
    case Phase::Between: return "#e8b72a";       // yellow
    case Phase::Circle: return "#cf3b3b";        // red
  }
  return "#000000";
}

namespace detail {

// Maps data coordinates to a y-up plot box inside the SVG canvas.
struct Frame {
  double x0, x1, y0, y1;          // data ranges
  double px0, px1, py0, py1;      // pixel box (py0 is the bottom)
  double x(double v) const { return px0 + (v - x0) / (x1 - x0) * (px1 - px0); }
  double y(double v) const { return py0 - (v - y0) / (y1 - y0) * (py0 - py1); }
};

inline void polyline(std::ostringstream& out, const std::vector<std::pair<double, double>>& pts, const Frame& f,
                     const std::string& color, bool dashed, double width = 1.5) {
  if (pts.size() < 2) return;
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
  if (dashed) out << " stroke-dasharray=\"6 4\"";
  out << " points=\"";
  for (const auto& [x, y] : pts) out << format_double_short(f.x(x)) << ',' << format_double_short(f.y(y)) << ' ';
  out << "\"/>\n";
}

inline void axes(std::ostringstream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  out << "<line x1=\"" << f.px0 << "\" y1=\"" << f.py0 << "\" x2=\"" << f.px1 << "\" y2=\"" << f.py0
      << "\" stroke=\"#444\"/>\n";
  out << "<line x1=\"" << f.px0 << "\" y1=\"" << f.py0 << "\" x2=\"" << f.px0 << "\" y2=\"" << f.py1
      << "\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << 0.5 * (f.px0 + f.px1) << "\" y=\"" << f.py0 + 32
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"" << f.px0 - 32 << "\" y=\"" << 0.5 * (f.py0 + f.py1)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << ylabel << "</text>\n";
}

inline std::string document(const std::string& body, int width, int height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body << "</svg>\n";
  return out.str();
}

}  // namespace detail

// R-a plane: one polyline per trajectory, split at phase changes and colored
// by phase, the R = a/2 diagonal dashed, and an optional horizontal dashed
// R = r_star guide.
inline std::string render_ra_flow(const std::vector<csv::Table>& tables, double r_star = 0.0) {
  const int width = 640, height = 480;
  detail::Frame f{0.0, 1.0, 0.0, 0.5, 60.0, width - 20.0, height - 50.0, 20.0};
  double amax = 0.0, rmax = 0.0;
  struct Series {
    std::vector<double> a, r;
    std::vector<Phase> phase;
    bool neutral = false;
  };
  std::vector<Series> series;
  for (const auto& t : tables) {
    Series s;
    s.a = t.numeric_column("a");
    s.r = t.numeric_column("R");
    // PDE trajectories carry no phase column; draw them neutrally
    const bool has_phase = std::find(t.header.begin(), t.header.end(), "phase") != t.header.end();
    if (has_phase) {
      const std::size_t pcol = t.column("phase");
      for (const auto& row : t.rows) s.phase.push_back(phase_from_string(row.at(pcol)));
    } else {
      s.phase.assign(s.a.size(), Phase::Between);
      s.neutral = true;
    }
    for (double v : s.a) amax = std::max(amax, v);
    for (double v : s.r) rmax = std::max(rmax, v);
    series.push_back(std::move(s));
  }
  f.x1 = amax * 1.05;
  f.y1 = std::max(rmax * 1.1, 0.55 * amax);

  std::ostringstream body;
  detail::axes(body, f, "a", "R");
  detail::polyline(body, {{0.0, 0.0}, {f.x1, 0.5 * f.x1}}, f, "#888888", true, 1.0);
  if (r_star > 0.0) detail::polyline(body, {{0.0, r_star}, {f.x1, r_star}}, f, "#888888", true, 1.0);
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> run;
    Phase current = s.phase.empty() ? Phase::Between : s.phase.front();
    auto color = [&](Phase p) { return s.neutral ? std::string("#777777") : std::string(phase_color(p)); };
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      if (s.phase[i] != current && run.size() >= 1) {
        run.emplace_back(s.a[i], s.r[i]);  // close the segment at the transition
        detail::polyline(body, run, f, color(current), false);
        run.clear();
        current = s.phase[i];
      }
      run.emplace_back(s.a[i], s.r[i]);
    }
    detail::polyline(body, run, f, color(current), false);
  }
  return detail::document(body.str(), width, height);
}

// Left-to-right sequence of fragment contours picked uniformly along a
// trajectory, filled with the phase color. Rows past the circle line are
// drawn as the circle they encode.
inline std::string render_contours(const csv::Table& table, int n, int count) {
  const auto a = table.numeric_column("a");
  const auto r = table.numeric_column("R");
  const std::size_t pcol = table.column("phase");
  if (a.empty()) throw std::invalid_argument("trajectory CSV has no rows");
  count = std::min<int>(count, static_cast<int>(a.size()));

  const int height = 240;
  const double pad = 16.0;
  std::ostringstream body;
  double xoff = pad;
  const double scale = (height - 2.0 * pad) / a.front();
  for (int j = 0; j < count; ++j) {
    const std::size_t i = count == 1 ? 0 : j * (a.size() - 1) / (count - 1);
    const double ai = a[i];
    const double ri = std::clamp(r[i], 0.0, 0.5 * ai);
    const Phase phase = phase_from_string(table.rows[i].at(pcol));
    const RoundedPolygon poly(n, ai, ri);
    const auto pts = sample_contour(poly, std::max(3 * n, 180));
    double ext = 0.0;
    for (const auto& p : pts) ext = std::max(ext, norm(p));
    const double cx = xoff + ext * scale;
    const double cy = 0.5 * height;
    body << "<polygon fill=\"" << phase_color(phase) << "\" fill-opacity=\"0.5\" stroke=\"" << phase_color(phase)
         << "\" points=\"";
    for (const auto& p : pts)
      body << format_double_short(cx + p.x * scale) << ',' << format_double_short(cy - p.y * scale) << ' ';
    body << "\"/>\n";
    xoff = cx + ext * scale + pad;
  }
  return detail::document(body.str(), static_cast<int>(xoff), height);
}

// Bifurcation diagram: per fold count, the stable branch solid and the
// unstable branch dashed in the (p, alpha) plane.
inline std::string render_branches(const csv::Table& table) {
  const int width = 640, height = 480;
  const auto ncol = table.numeric_column("n");
  const auto pcol = table.numeric_column("p");
  const auto acol = table.numeric_column("alpha");
  const std::size_t scol = table.column("stability");
  double pmax = 0.0, amax = 0.0;
  std::map<std::pair<int, bool>, std::vector<std::pair<double, double>>> branches;
  for (std::size_t i = 0; i < pcol.size(); ++i) {
    const bool stable = table.rows[i].at(scol) == "STABLE";
    branches[{static_cast<int>(ncol[i]), stable}].emplace_back(pcol[i], acol[i]);
    pmax = std::max(pmax, pcol[i]);
    amax = std::max(amax, acol[i]);
  }
  detail::Frame f{0.0, std::max(pmax * 1.05, 1e-6), 0.0, std::max(amax * 1.1, 1e-6), 60.0, width - 20.0,
                  height - 50.0, 20.0};
  std::ostringstream body;
  detail::axes(body, f, "p", "alpha");
  const std::vector<std::string> palette = {"#3b6fd4", "#cf3b3b", "#2c9c4b", "#e8821f",
                                            "#8b4fc0", "#9b7a2f", "#3aa7a7", "#c04f82"};
  int color_idx = 0;
  std::map<int, std::string> color_of;
  for (const auto& [key, pts] : branches) {
    if (!color_of.count(key.first)) color_of[key.first] = palette[color_idx++ % palette.size()];
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    detail::polyline(body, sorted, f, color_of[key.first], !key.second);
  }
  return detail::document(body.str(), width, height);
}

}  // namespace abrade::svg
