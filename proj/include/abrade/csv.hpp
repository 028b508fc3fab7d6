#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "abrade/bloore.hpp"
#include "abrade/environment.hpp"
#include "abrade/homothetic.hpp"
#include "abrade/numfmt.hpp"
#include "abrade/ode.hpp"

namespace abrade::csv {

// A parsed CSV: header, data cells as strings, and '#' comment lines in
// file order.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::invalid_argument("CSV is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }

  std::vector<double> numeric_column(const std::string& name) const {
    const std::size_t idx = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(detail::parse_number(row.at(idx)));
    return out;
  }
};

inline Table read_table(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(line);
      continue;
    }
    auto cells = detail::split(line, ',');
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::invalid_argument("CSV has no header line");
  return t;
}

// Uniform-stride downsampling to at most max_rows rows, always keeping the
// first and last sample.
inline std::vector<std::size_t> downsample_indices(std::size_t count, std::size_t max_rows) {
  std::vector<std::size_t> idx;
  if (count == 0) return idx;
  const std::size_t stride = count <= max_rows ? 1 : (count + max_rows - 1) / max_rows;
  for (std::size_t i = 0; i < count; i += stride) idx.push_back(i);
  if (idx.back() != count - 1) idx.push_back(count - 1);
  return idx;
}

inline void write_trajectory(std::ostream& out, const Trajectory& traj, std::size_t max_rows = 10000) {
  out << "a,R,phase,i_proj\n";
  for (const std::size_t i : downsample_indices(traj.samples.size(), max_rows)) {
    const auto& s = traj.samples[i];
    out << format_double(s.a) << ',' << format_double(s.r) << ',' << to_string(s.phase) << ','
        << format_double(s.i_proj) << '\n';
  }
  out << "# termination=" << to_string(traj.termination) << '\n';
  out << "# env=" << traj.environment << '\n';
  out << "# n=" << traj.n << '\n';
  if (traj.termination == Termination::ReachedCircle) out << "# tail=circle_homothetic_shrink\n";
}

inline void write_pde_trajectory(std::ostream& out, const PdeTrajectory& traj, std::size_t max_rows = 10000) {
  out << "time,a,R,i_proj\n";
  for (const std::size_t i : downsample_indices(traj.samples.size(), max_rows)) {
    const auto& s = traj.samples[i];
    out << format_double(s.time) << ',' << format_double(s.a) << ',' << format_double(s.r) << ','
        << format_double(s.i_proj) << '\n';
  }
  out << "# r_convention=global_kappa_max\n";
}

// Contour snapshots: one row per marker point, snapshots separated by a
// blank line.
inline void write_snapshots(std::ostream& out, const PdeTrajectory& traj) {
  out << "step,time,x,y\n";
  bool first = true;
  for (const auto& [step_idx, curve] : traj.snapshots) {
    if (!first) out << '\n';
    first = false;
    for (const Vec2& p : curve.pts)
      out << step_idx << ',' << format_double(curve.time) << ',' << format_double(p.x) << ','
          << format_double(p.y) << '\n';
  }
}

inline void write_branches(std::ostream& out, const std::vector<BranchPoint>& points,
                           const std::vector<std::pair<int, double>>& folds) {
  out << "n,p,alpha,stability\n";
  for (const auto& bp : points)
    out << bp.n << ',' << format_double(bp.p) << ',' << format_double(bp.alpha) << ',' << to_string(bp.stability)
        << '\n';
  for (const auto& [n, p] : folds) out << "# fold n=" << n << " p=" << format_double(p) << '\n';
}

}  // namespace abrade::csv
