#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "abrade/bloore.hpp"
#include "abrade/csv.hpp"
#include "abrade/environment.hpp"
#include "abrade/errors.hpp"
#include "abrade/homothetic.hpp"
#include "abrade/ode.hpp"
#include "abrade/scenario.hpp"
#include "abrade/svg.hpp"

namespace abrade::cli {

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary keeps line endings stable
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

inline csv::Table read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return csv::read_table(in);
}

}  // namespace detail

inline StepControl step_control_of(const Scenario& s) {
  StepControl ctrl;
  ctrl.h = s.h;
  ctrl.a_min = s.a_min;
  ctrl.slope_swap_threshold = s.slope_swap;
  ctrl.event_tolerance = s.event_tol;
  if (s.circle_stop == 0) ctrl.stop_at_circle = false;
  if (s.circle_stop == 1) ctrl.stop_at_circle = true;
  return ctrl;
}

inline void run_simulate(const Scenario& s) {
  const Environment env = parse_environment(s.env);
  const Trajectory traj = integrate(s.n, s.a0, s.r0, env, step_control_of(s));
  auto out = detail::open_output(s.out);
  csv::write_trajectory(out, traj);
}

inline void run_pde(const Scenario& s) {
  const RoundedPolygon shape(s.n, s.a0, s.r0);
  const Curve c0 = init_contour(shape, s.points, s.r_seed);
  const PdeTrajectory traj = evolve(c0, s.c, s.w0, PdeStop{s.a_min, s.i_proj_min}, s.snapshot_every,
                                    !s.snapshots_out.empty());
  auto out = detail::open_output(s.out);
  csv::write_pde_trajectory(out, traj);
  if (!s.snapshots_out.empty()) {
    auto snaps = detail::open_output(s.snapshots_out);
    csv::write_snapshots(snaps, traj);
  }
}

struct CompareResult {
  double err = 0.0;
  bool pass = false;
  double overlap_lo = 0.0;
  double overlap_hi = 0.0;
  std::vector<std::array<double, 4>> rows;  // a, i_ode, i_pde, diff (descending a)
};

namespace detail {

// Piecewise-linear interpolation of a series given in any a-order.
struct Interpolant {
  std::vector<std::pair<double, double>> knots;  // ascending in a
  explicit Interpolant(std::vector<std::pair<double, double>> pts) : knots(std::move(pts)) {
    std::sort(knots.begin(), knots.end());
    std::size_t w = 0;
    for (std::size_t i = 0; i < knots.size(); ++i)
      if (w == 0 || knots[i].first > knots[w - 1].first) knots[w++] = knots[i];
    knots.resize(w);
    if (knots.size() < 2) throw std::runtime_error("series needs at least two distinct sizes");
  }
  double operator()(double x) const {
    auto it = std::lower_bound(knots.begin(), knots.end(), std::make_pair(x, -1e300));
    if (it == knots.begin()) return it->second;
    if (it == knots.end()) return (it - 1)->second;
    const auto& [x1, y1] = *(it - 1);
    const auto& [x2, y2] = *it;
    const double w = (x - x1) / (x2 - x1);
    return (1.0 - w) * y1 + w * y2;
  }
};

}  // namespace detail

// Resamples both isoperimetric-ratio series on a 200-point grid over the
// shared a-range and reports the peak deviation relative to the net change
// of the reference (PDE) series.
inline CompareResult compare_iproj(const std::vector<std::pair<double, double>>& ode_series,
                                   const std::vector<std::pair<double, double>>& pde_series) {
  if (ode_series.size() < 2 || pde_series.size() < 2)
    throw std::runtime_error("comparison needs at least two samples per series");
  detail::Interpolant ode(ode_series);
  detail::Interpolant pde(pde_series);
  const double ode_lo = ode.knots.front().first, ode_hi = ode.knots.back().first;
  const double pde_lo = pde.knots.front().first, pde_hi = pde.knots.back().first;
  const double lo = std::max(ode_lo, pde_lo);
  const double hi = std::min(ode_hi, pde_hi);
  const double span = hi - lo;
  if (!(span > 0.0) || span < 0.5 * (ode_hi - ode_lo) || span < 0.5 * (pde_hi - pde_lo))
    throw std::runtime_error("size ranges overlap by less than half of a series");

  const double denom = std::abs(pde_series.back().second - pde_series.front().second);
  if (!(denom > 0.0)) throw std::runtime_error("reference series has no net change in i_proj");

  CompareResult res;
  res.overlap_lo = lo;
  res.overlap_hi = hi;
  const int grid = 200;
  for (int j = 0; j < grid; ++j) {
    const double a = hi - span * j / (grid - 1);
    const double io = ode(a);
    const double ip = pde(a);
    res.rows.push_back({a, io, ip, io - ip});
    res.err = std::max(res.err, std::abs(io - ip) / denom);
  }
  res.pass = res.err < 0.10;
  return res;
}

inline CompareResult run_compare_files(const std::string& ode_path, const std::string& pde_path,
                                       const std::string& report_path) {
  const csv::Table ode = detail::read_csv_file(ode_path);
  const csv::Table pde = detail::read_csv_file(pde_path);
  auto series_of = [](const csv::Table& t) {
    const auto a = t.numeric_column("a");
    const auto i = t.numeric_column("i_proj");
    std::vector<std::pair<double, double>> s;
    for (std::size_t k = 0; k < a.size(); ++k) s.emplace_back(a[k], i[k]);
    return s;
  };
  const CompareResult res = compare_iproj(series_of(ode), series_of(pde));
  if (!report_path.empty()) {
    auto out = detail::open_output(report_path);
    out << "a,i_ode,i_pde,diff\n";
    for (const auto& row : res.rows)
      out << format_double(row[0]) << ',' << format_double(row[1]) << ',' << format_double(row[2]) << ','
          << format_double(row[3]) << '\n';
  }
  return res;
}

inline void run_branches(const Scenario& s) {
  std::vector<double> grid;
  for (int j = 0; j < s.p_count; ++j)
    grid.push_back(s.p_count == 1 ? s.p_min : s.p_min + (s.p_max - s.p_min) * j / (s.p_count - 1));
  const auto points = branch_diagram(s.n_list, grid);
  std::vector<std::pair<int, double>> folds;
  for (int n : s.n_list) folds.emplace_back(n, fold_point(n));
  auto out = detail::open_output(s.out);
  csv::write_branches(out, points, folds);
}

inline void run_render(const Scenario& s) {
  std::string svg_text;
  if (s.mode == "ra_flow") {
    std::vector<csv::Table> tables;
    for (const auto& path : s.inputs) tables.push_back(detail::read_csv_file(path));
    svg_text = svg::render_ra_flow(tables, s.rstar);
  } else if (s.mode == "contours") {
    const csv::Table table = detail::read_csv_file(s.inputs.front());
    int n = s.n;
    for (const auto& comment : table.comments)  // trajectory CSVs carry their fold count
      if (comment.rfind("# n=", 0) == 0) n = static_cast<int>(detail::parse_integer(comment.substr(4)));
    svg_text = svg::render_contours(table, n, s.contour_count);
  } else {
    svg_text = svg::render_branches(detail::read_csv_file(s.inputs.front()));
  }
  auto out = detail::open_output(s.out);
  out << svg_text;
}

inline const char* usage_text() {
  return "usage: abrade <simulate|pde|compare|branches|render> [--flags]\n"
         "  simulate --n N --a0 A --r0 R --env ENV --out FILE [--h H] [--a-min A]\n"
         "           [--slope-swap S] [--event-tol T] [--circle-stop 0|1] [--config FILE]\n"
         "  pde      --n N --a0 A --r0 R --c C --w0 0|1 --N POINTS --r-seed R\n"
         "           (--a-min A | --i-proj-min I) --out FILE [--snapshots FILE]\n"
         "           [--snapshot-every K] [--config FILE]\n"
         "  compare  --ode FILE --pde FILE [--out REPORT]\n"
         "  branches --n-list 3,4,... --p-min P --p-max P --p-count K --out FILE\n"
         "  render   --mode ra_flow|contours|branches --in FILE[,FILE...] --out FILE\n"
         "           [--rstar R] [--n N] [--count K]\n"
         "environments: constant:<r> dust mixture:<p>:<r>,... polygonal:<n*>:<a*>:<r*>\n"
         "              stationary:<R> homothetic selfdual mixed:<p>\n";
}

// Full dispatch with the documented exit statuses: 0 success, 1 runtime
// failure, 2 usage error.
inline int run_cli(const std::vector<std::string>& args) {
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
    std::cout << usage_text();
    return 0;
  }
  try {
    const Scenario s = parse_scenario(args);
    switch (s.kind) {
      case Kind::Simulate: run_simulate(s); break;
      case Kind::Pde: run_pde(s); break;
      case Kind::Compare: {
        const CompareResult res = run_compare_files(s.ode_csv, s.pde_csv, s.out);
        std::cout << (res.pass ? "PASS" : "FAIL") << " err=" << format_double(res.err)
                  << " threshold=0.1 overlap=[" << format_double(res.overlap_lo) << ','
                  << format_double(res.overlap_hi) << "]\n";
        break;
      }
      case Kind::Branches: run_branches(s); break;
      case Kind::Render: run_render(s); break;
    }
    return 0;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n' << usage_text();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace abrade::cli
