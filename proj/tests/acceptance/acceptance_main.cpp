// Acceptance suite: one line per criterion, nonzero exit if any checked
// criterion fails. `--only k[,k...]` and `--skip k[,k...]` select criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "abrade/bloore.hpp"
#include "abrade/csv.hpp"
#include "abrade/environment.hpp"
#include "abrade/homothetic.hpp"
#include "abrade/ode.hpp"
#include "abrade/runner.hpp"
#include "oracles.hpp"

using namespace abrade;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "abrade_acceptance";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// 1. Dust abrasion follows the exact diagonal R(a) = R0 - (a0 - a)/2.
Outcome criterion_dust() {
  Outcome out;
  for (int n : {3, 5, 8}) {
    const Trajectory t = integrate(n, 1.0, 0.3, Environment::dust());
    out.require(t.termination == Termination::ReachedSharp, "expected REACHED_SHARP");
    double dev = 0.0;
    for (const auto& s : t.samples) dev = std::max(dev, std::abs(s.r - (0.3 - (1.0 - s.a) / 2.0)));
    out.require(dev < 1e-12, "n=" + std::to_string(n) + " deviation " + format_double_short(dev));
    if (out.pass) out.detail = "max|R - line| = " + format_double_short(dev);
  }
  return out;
}

// 2. StationaryControl holds R = 0.241421 over a in [1, 0.2].
Outcome criterion_stationary() {
  Outcome out;
  const double target = 0.241421;
  StepControl ctrl;
  ctrl.a_min = 0.2;
  ctrl.stop_at_circle = false;  // the hold crosses R = a/2 at a = 2R
  const Trajectory t = integrate(4, 1.0, target, Environment::stationary(target), ctrl);
  out.require(t.termination == Termination::ReachedAmin, "expected REACHED_AMIN");
  out.require(std::abs(t.samples.back().a - 0.2) < 1e-9, "run must cover a down to 0.2");
  double dev = 0.0;
  for (const auto& s : t.samples) dev = std::max(dev, std::abs(s.r - target));
  out.require(dev < 1e-8, "deviation " + format_double_short(dev));
  if (out.pass) out.detail = "max|R - target| = " + format_double_short(dev);
  return out;
}

// 3. RK4 agrees with the inverted implicit solution within 1e-6 in R.
Outcome criterion_analytic_agreement() {
  Outcome out;
  double worst = 0.0;
  for (int n : {3, 4, 5, 8})
    for (double rs : {0.05, 0.1, 0.3}) {
      StepControl ctrl;
      ctrl.a_min = 0.2;
      const Trajectory t = integrate(n, 1.0, 0.0, Environment::constant(rs), ctrl);
      for (const auto& s : t.samples) {
        if (s.r > 0.5 * s.a - 1e-6) continue;  // the analytic branch ends at its circle event
        worst = std::max(worst, std::abs(s.r - analytic_radius(n, s.a, 0.0, 1.0, rs)));
      }
    }
  out.require(worst < 1e-6, "max deviation " + format_double_short(worst));
  out.detail = "max|R_rk4 - R_analytic| = " + format_double_short(worst);
  return out;
}

// 4. A two-component mixture equals its equivalent constant abrader.
Outcome criterion_mixture() {
  Outcome out;
  const std::vector<std::pair<double, double>> comp{{0.3, 0.2}, {0.7, 0.05}};
  const Trajectory tm = integrate(4, 1.0, 0.0, Environment::mixture(comp));
  const Trajectory tc = integrate(4, 1.0, 0.0, Environment::constant(mixture_radius(comp)));
  out.require(tm.samples.size() == tc.samples.size(), "step sequences differ in length");
  double dev = 0.0;
  if (out.pass)
    for (std::size_t i = 0; i < tm.samples.size(); ++i) {
      dev = std::max(dev, std::abs(tm.samples[i].a - tc.samples[i].a));
      dev = std::max(dev, std::abs(tm.samples[i].r - tc.samples[i].r));
    }
  out.require(dev <= 1e-14, "per-sample deviation " + format_double_short(dev));
  if (out.pass) out.detail = "per-sample deviation = " + format_double_short(dev);
  return out;
}

// 5. HomotheticControl keeps R/a constant to 1e-9 relative down to a = 0.01.
Outcome criterion_homothetic_control() {
  Outcome out;
  double worst = 0.0;
  for (int n : {3, 4, 5}) {
    StepControl ctrl;
    ctrl.a_min = 0.01;
    const Trajectory t = integrate(n, 1.0, 0.25, Environment::homothetic(), ctrl);
    out.require(std::abs(t.samples.back().a - 0.01) < 1e-9, "run must cover a down to 0.01");
    for (const auto& s : t.samples) worst = std::max(worst, std::abs(s.r / s.a - 0.25) / 0.25);
  }
  out.require(worst < 1e-9, "relative deviation " + format_double_short(worst));
  out.detail = "max relative deviation of R/a = " + format_double_short(worst);
  return out;
}

// 6. ODE-vs-PDE validation: nine (n, R* = c) cases through the file-level
// pipeline, each must report err < 0.10 under the pinned metric.
Outcome criterion_pde_validation() {
  Outcome out;
  std::string per_case;
  for (int n : {3, 4, 5})
    for (double rc : {0.05, 0.1, 0.3}) {
      StepControl ctrl;
      ctrl.a_min = 0.05;
      const Trajectory ode = integrate(n, 1.0, 0.0, Environment::constant(rc), ctrl);
      const double a_end = ode.samples.back().a;
      const Curve c0 = init_contour(RoundedPolygon(n, 1.0, 0.0), 1024, 0.005);
      const PdeTrajectory pde = evolve(c0, rc, 1, PdeStop{a_end, 0.0}, 25);

      const std::string tag = "n" + std::to_string(n) + "_c" + format_double_short(rc);
      const std::string ode_path = (work_dir() / ("ode_" + tag + ".csv")).string();
      const std::string pde_path = (work_dir() / ("pde_" + tag + ".csv")).string();
      {
        std::ofstream fo(ode_path, std::ios::binary);
        csv::write_trajectory(fo, ode);
        std::ofstream fp(pde_path, std::ios::binary);
        csv::write_pde_trajectory(fp, pde);
      }
      const cli::CompareResult res =
          cli::run_compare_files(ode_path, pde_path, (work_dir() / ("report_" + tag + ".csv")).string());
      // net-change error, recorded alongside the gating metric
      const double d_ode = std::abs(ode.samples.back().i_proj - ode.samples.front().i_proj);
      const double d_pde = std::abs(pde.samples.back().i_proj - pde.samples.front().i_proj);
      const double err_delta = std::abs(d_ode - d_pde) / d_pde;
      per_case += "\n      n=" + std::to_string(n) + " R*=c=" + format_double_short(rc) + ": err=" +
                  format_double_short(res.err) + (res.pass ? " PASS" : " FAIL") +
                  " (net-change err=" + format_double_short(err_delta) + ")";
      out.require(res.pass, "case n=" + std::to_string(n) + ", c=" + format_double_short(rc) +
                                " reports err=" + format_double_short(res.err));
    }
  out.detail = (out.pass ? "" : out.detail + "; known model-vs-reference gap, the net-change "
                                             "disagreement stays near 2-3% (see README)") +
               per_case;
  return out;
}

// 7. Self-dual runs from sharp corners: interior maximum of R for n = 3, 4;
// none for n >= 6 within the plotted window R <= 0.6 a0.
Outcome criterion_selfdual_split() {
  Outcome out;
  for (int n : {3, 4}) {
    const Trajectory t = integrate(n, 1.0, 0.0, Environment::self_dual());
    double rmax = -1.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < t.samples.size(); ++i)
      if (t.samples[i].r > rmax) {
        rmax = t.samples[i].r;
        at = i;
      }
    const bool interior = at > 0 && at + 1 < t.samples.size() && rmax > t.samples.front().r &&
                          rmax > t.samples.back().r;
    out.require(interior, "n=" + std::to_string(n) + " lacks an interior maximum");
    if (out.pass)
      out.detail += (out.detail.empty() ? "max R: " : ", ") + std::to_string(n) + "-gon " +
                    format_double_short(rmax);
  }
  for (int n : {6, 8, 10}) {
    const Trajectory t = integrate(n, 1.0, 0.0, Environment::self_dual());
    double prev = -1.0;
    bool monotone = true;
    for (const auto& s : t.samples) {
      if (s.r > 0.6) break;  // window cap, see notes ledger
      monotone = monotone && s.r >= prev;
      prev = s.r;
    }
    out.require(monotone, "n=" + std::to_string(n) + " turns inside the window (observation gate)");
  }
  return out;
}

// 8. Mixed self-dual flow lands on the stable homothetic ray.
Outcome criterion_mixed_attraction() {
  Outcome out;
  const Trajectory t = integrate(3, 1.0, 0.0, Environment::mixed(0.1));
  const auto& last = t.samples.back();
  out.require(std::abs(last.a - 1e-3) < 1e-9, "run must reach a = 1e-3");
  const double alpha = last.r / last.a;
  out.require(std::abs(alpha - 0.094326) < 1e-3, "R/a = " + format_double_short(alpha));
  out.detail = "R/a at a=1e-3: " + format_double_short(alpha);
  return out;
}

// 9. Fold structure: location of the n = 3 fold and monotone decrease in n.
Outcome criterion_fold() {
  Outcome out;
  const double fold3 = fold_point(3);
  out.require(std::abs(fold3 - 0.19135) < 1e-4, "fold_point(3) = " + format_double_short(fold3));
  double lo = 1e-9, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (solve_alpha(3, mid).empty() ? hi : lo) = mid;
  }
  out.require(std::abs(fold3 - 0.5 * (lo + hi)) < 1e-9,
              "closed form and bisection disagree: " + format_double_short(fold3 - 0.5 * (lo + hi)));
  double prev = fold3;
  for (int n = 4; n <= 10; ++n) {
    const double cur = fold_point(n);
    out.require(cur < prev, "fold_point not decreasing at n=" + std::to_string(n));
    prev = cur;
  }
  out.detail = "fold_point(3) = " + format_double_short(fold3) + ", decreasing to fold_point(10) = " +
               format_double_short(fold_point(10));
  return out;
}

// 10. PDE oracle: shrinking circles match the exact scalar law to 0.1%, and
// the geometry closed forms match their sampling oracles.
Outcome criterion_pde_oracle() {
  Outcome out;
  for (auto [w0, cc] : {std::pair<int, double>{1, 0.1}, std::pair<int, double>{0, 1.0}}) {
    Curve c = init_contour(RoundedPolygon(4, 1.0, 0.5), 512);
    const double h0 = chain_perimeter(c.pts) / 512.0;
    double r_ref = 0.5;
    double worst = 0.0;
    long k = 0;
    while (0.5 * measure(c).a >= 10.0 * h0) {
      const double dt = 0.9 * max_stable_dt(c, cc, w0);
      auto f = [&](double rr) { return -(w0 + cc / rr); };
      const double k1 = f(r_ref), k2 = f(r_ref + 0.5 * dt * k1), k3 = f(r_ref + 0.5 * dt * k2),
                   k4 = f(r_ref + dt * k3);
      r_ref += dt * (k1 + 2.0 * (k2 + k3) + k4) / 6.0;
      c = step(c, cc, w0, dt);
      if (++k % 100 == 0) worst = std::max(worst, std::abs(0.5 * measure(c).a - r_ref) / r_ref);
    }
    worst = std::max(worst, std::abs(0.5 * measure(c).a - r_ref) / r_ref);
    out.require(worst < 1e-3, "w0=" + std::to_string(w0) + " circle error " + format_double_short(worst));
    out.detail += (out.detail.empty() ? "circle err: " : ", ") + format_double_short(worst);
  }
  {
    std::mt19937 rng(7u);
    std::uniform_int_distribution<int> pick_n(3, 12);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    double worst_perim = 0.0;
    bool mc_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = pick_n(rng);
      const double r = 0.5 * pick(rng);
      const RoundedPolygon p(n, 1.0, r);
      const double len = testing::polyline_length(sample_contour(p, 100000));
      worst_perim = std::max(worst_perim, std::abs(len - p.perimeter()) / p.perimeter());
      const auto mc = testing::monte_carlo_area(n, 1.0, r, 200000, 100u + trial);
      mc_ok = mc_ok && std::abs(p.area() - mc.estimate) <= 3.0 * mc.sigma + 1e-12;
    }
    const auto mc_big = testing::monte_carlo_area(4, 1.0, 0.1, 10'000'000, 20240811u);
    mc_ok = mc_ok && std::abs(area(4, 1.0, 0.1) - mc_big.estimate) <= 3.0 * mc_big.sigma;
    out.require(worst_perim < 1e-6, "perimeter oracle deviation " + format_double_short(worst_perim));
    out.require(mc_ok, "area outside the Monte-Carlo 3-sigma bound");
    out.detail += ", perimeter oracle err: " + format_double_short(worst_perim);
  }
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, skip;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto parse_list = [&](std::set<int>& into, const std::string& text) {
      std::size_t pos = 0;
      while (pos < text.size()) {
        const std::size_t next = text.find(',', pos);
        into.insert(std::stoi(text.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
    };
    if (arg == "--only" && i + 1 < argc)
      parse_list(only, argv[++i]);
    else if (arg == "--skip" && i + 1 < argc)
      parse_list(skip, argv[++i]);
    else {
      std::fprintf(stderr, "usage: acceptance [--only k,...] [--skip k,...]\n");
      return 2;
    }
  }

  const Criterion criteria[] = {
      {1, "dust exactness", 1.0, criterion_dust},
      {2, "stationary radius hold", 1.0, criterion_stationary},
      {3, "analytic-numeric agreement", 10.0, criterion_analytic_agreement},
      {4, "mixture equivalence", 1.0, criterion_mixture},
      {5, "homothetic control ray", 5.0, criterion_homothetic_control},
      {6, "ODE-vs-PDE validation", 300.0, criterion_pde_validation},
      {7, "self-dual non-monotonicity split", 5.0, criterion_selfdual_split},
      {8, "mixed homothetic attraction", 5.0, criterion_mixed_attraction},
      {9, "fold structure", 1.0, criterion_fold},
      {10, "PDE and geometry oracles", 30.0, criterion_pde_oracle},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    if (skip.count(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed > c.budget_seconds) {
      out.pass = false;
      out.detail += " [exceeded " + format_double_short(c.budget_seconds) + " s budget]";
    }
    std::printf("%s %2d. %-34s %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
