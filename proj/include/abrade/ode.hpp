#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "abrade/environment.hpp"
#include "abrade/errors.hpp"
#include "abrade/geometry.hpp"

namespace abrade {

// Rounding rate dR/da of the fragment under collisional abrasion:
//   dR/da = (R C + R*_eff) / (2 R C) = 1/2 + R*_eff / (2 R C),  C = 1 - 1/S.
// Singular at R = 0 whenever the effective abrader has positive radius; use
// inverse_rhs there. Reduces to exactly 1/2 when the abraders are dust.
inline double rhs(int n, double r, double a, const Environment& env) {
  if (r == 0.0) throw singular_state_error("dR/da is singular at r = 0; integrate da/dR instead");
  const double r_eff = env.effective_radius(n, r, a);
  if (r_eff == 0.0) return 0.5;
  const double c = polygon_constants(n).c;
  return 0.5 + r_eff / (2.0 * r * c);
}

// Reciprocal slope da/dR = 2 R C / (R C + R*_eff). Smooth through r = 0 for
// every environment with a positive sharp-corner abrader limit, where it
// vanishes: the vertical tangent of dR/da becomes a regular point.
inline double inverse_rhs(int n, double r, double a, const Environment& env) {
  if (r == 0.0) {
    if (env.sharp_limit_radius(n, a) > 0.0) return 0.0;
    throw stationary_point_error("da/dR undefined: flow is stationary at the sharp state");
  }
  const double c = polygon_constants(n).c;
  const double num = r * c + env.effective_radius(n, r, a);
  if (std::abs(num) < 1e-15) throw stationary_point_error("da/dR diverges at a stationary radius");
  return 2.0 * r * c / num;
}

// Implicit solution of the constant-abrader flow: the size a at which the
// corner radius reaches r, starting from (a0, r0). Valid strictly below the
// stationary radius S r*/(1 - S); dust reduces to the affine branch.
inline double analytic_size(int n, double r, double r0, double a0, double r_star) {
  if (r_star < 0.0) throw std::invalid_argument("abrader radius must be non-negative");
  if (r_star == 0.0) return a0 + 2.0 * (r - r0);
  const double s = polygon_constants(n).s;
  const double g1 = -r + s * (r + r_star);
  const double g0 = -r0 + s * (r0 + r_star);
  if (g0 <= 0.0 || g1 <= 0.0)
    throw std::domain_error("corner radius at or beyond the stationary value: implicit solution undefined");
  return a0 + 2.0 * (r - r0) + 2.0 * s * r_star * (std::log(g0) - std::log(g1)) / (s - 1.0);
}

// Inverse of analytic_size: the corner radius at size a, by bisection on
// [r0, min(a/2, stationary radius)].
inline double analytic_radius(int n, double a, double r0, double a0, double r_star) {
  if (a > a0) throw std::invalid_argument("target size exceeds the initial size");
  if (r_star == 0.0) return r0 + 0.5 * (a - a0);
  if (a == a0) return r0;
  const double s = polygon_constants(n).s;
  const double r_stat = s * r_star / (1.0 - s);
  double lo = r0;
  double hi = std::min(0.5 * a, r_stat * (1.0 - 1e-13));
  if (hi <= lo) throw no_root_error("trajectory reaches the circle line before shrinking to the target size");
  const double tol = 1e-12 * a0;
  const double f_hi = analytic_size(n, hi, r0, a0, r_star) - a;
  if (f_hi > 0.0) {
    if (f_hi <= tol) return hi;  // root sits on the bracket boundary
    throw no_root_error("trajectory reaches the circle line before shrinking to the target size");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = analytic_size(n, mid, r0, a0, r_star) - a;
    if (std::abs(f) <= tol) return mid;
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-17 * std::max(1.0, hi)) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

enum class Termination { ReachedCircle, ReachedSharp, Vanished, ReachedAmin };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedCircle: return "REACHED_CIRCLE";
    case Termination::ReachedSharp: return "REACHED_SHARP";
    case Termination::Vanished: return "VANISHED";
    case Termination::ReachedAmin: return "REACHED_AMIN";
  }
  return "?";
}

struct TrajectorySample {
  double a;
  double r;
  Phase phase;
  double i_proj;
};

struct Trajectory {
  int n = 0;
  std::string environment;
  Termination termination = Termination::ReachedAmin;
  std::vector<TrajectorySample> samples;
};

struct StepControl {
  double h = 0.0;                      // step in the active variable; <= 0 selects 1e-4 * a0
  double slope_swap_threshold = 1.0;   // switch to da/dR when |dR/da| exceeds this
  double a_min = 0.0;                  // stopping size; <= 0 selects 1e-3 * a0
  double event_tolerance = 1e-12;      // localization tolerance in the active variable
  std::optional<bool> stop_at_circle;  // unset: the environment decides
  std::size_t max_steps = 20'000'000;
};

namespace detail {

template <class F>
double rk4_step(F&& f, double x, double y, double h) {
  const double k1 = f(x, y);
  const double k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = f(x + h, y + h * k3);
  return y + h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0;
}

}  // namespace detail

// Fixed-step classic Runge-Kutta in whichever of a or R currently yields the
// gentler slope, with events (circle line, sharp corners, minimum size)
// localized by bisecting the step. Size a decreases monotonically.
inline Trajectory integrate(int n, double a0, double r0, const Environment& env, StepControl ctrl = {}) {
  RoundedPolygon initial(n, a0, r0);  // validates the starting state
  (void)initial;
  if (!(ctrl.slope_swap_threshold > 0.0) || !(ctrl.event_tolerance > 0.0))
    throw std::invalid_argument("step control parameters must be positive");
  const double h = ctrl.h > 0.0 ? ctrl.h : 1e-4 * a0;
  const double a_min = ctrl.a_min > 0.0 ? ctrl.a_min : 1e-3 * a0;
  const double tol = ctrl.event_tolerance;
  const bool stop_circle = ctrl.stop_at_circle.value_or(env.circle_terminates());

  Trajectory traj;
  traj.n = n;
  traj.environment = env.describe();

  double a = a0;
  double r = r0;
  auto push = [&](double aa, double rr) {
    const double rs = rr > 0.0 ? env.effective_radius(n, rr, aa) : env.sharp_limit_radius(n, aa);
    traj.samples.push_back({aa, rr, classify_phase(n, aa, rr, rs), isoperimetric_ratio(n, aa, rr)});
  };
  push(a, r);

  if (stop_circle && std::abs(r - 0.5 * a) <= 1e-9 * a) {
    traj.termination = Termination::ReachedCircle;  // circle is absorbing
    return traj;
  }
  if (a <= a_min) {
    traj.termination = Termination::ReachedAmin;
    return traj;
  }

  auto f_a = [&](double aa, double rr) { return rhs(n, rr, aa, env); };
  auto f_r = [&](double rr, double aa) { return inverse_rhs(n, rr, aa, env); };

  // Bisects the step fraction until |event(state(lambda))| <= tol. The event
  // function is negative before the crossing.
  auto localize = [&](auto&& state_of, auto&& event_of) -> double {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double e = event_of(state_of(mid));
      if (std::abs(e) <= tol) return mid;
      (e < 0.0 ? lo : hi) = mid;
    }
    throw step_collapse_error("event bisection failed to converge in 200 iterations");
  };

  for (std::size_t step = 0; step < ctrl.max_steps; ++step) {
    if (r <= 0.0) {
      // Sharp state: either the flow climbs away vertically (positive
      // abrader limit), rides the invariant ray R = 0, or exits downward.
      if (env.sharp_limit_radius(n, a) > 0.0) {
        // handled below in R-mode
      } else {
        const double probe = rhs(n, 1e-9 * a0, a, env);
        if (std::abs(probe) < 1e-3) {
          const double da = std::max(a_min - a, -h);
          a += da;
          push(a, r);
          if (a <= a_min) {
            traj.termination = Termination::ReachedAmin;
            return traj;
          }
          continue;
        }
        traj.termination = Termination::ReachedSharp;
        return traj;
      }
    }

    bool r_mode;
    if (r <= 0.0) {
      r_mode = true;
    } else {
      const double slope = f_a(a, r);
      r_mode = std::abs(slope) > ctrl.slope_swap_threshold;
    }

    struct State {
      double a;
      double r;
    };

    if (!r_mode) {
      double da = -h;
      bool lands_on_amin = false;
      if (a + da <= a_min) {
        da = a_min - a;
        lands_on_amin = true;
      }
      auto state_of = [&](double lam) -> State {
        const double d = lam * da;
        return {a + d, detail::rk4_step(f_a, a, r, d)};
      };
      const State full = state_of(1.0);
      double best_lam = 2.0;
      std::optional<Termination> term;
      if (full.r <= 0.0) {
        const double lam = localize(state_of, [](const State& s) { return -s.r; });
        if (lam < best_lam) {
          best_lam = lam;
          term = Termination::ReachedSharp;
        }
      }
      if (stop_circle && full.r - 0.5 * full.a >= 0.0) {
        const double lam = localize(state_of, [](const State& s) { return s.r - 0.5 * s.a; });
        if (lam < best_lam) {
          best_lam = lam;
          term = Termination::ReachedCircle;
        }
      }
      if (term) {
        const State s = state_of(best_lam);
        a = s.a;
        r = *term == Termination::ReachedSharp ? std::max(s.r, 0.0) : s.r;
        push(a, r);
        traj.termination = *term;
        return traj;
      }
      a = full.a;
      r = full.r;
      push(a, r);
      if (lands_on_amin || a <= a_min) {
        traj.termination = Termination::ReachedAmin;
        return traj;
      }
    } else {
      const double d0 = f_r(r, a);
      const double dr = d0 > 0.0 ? -h : h;  // keep a decreasing
      auto state_of = [&](double lam) -> State {
        const double d = lam * dr;
        return {detail::rk4_step(f_r, r, a, d), r + d};
      };
      const State full = state_of(1.0);
      double best_lam = 2.0;
      std::optional<Termination> term;
      if (full.r <= 0.0) {
        const double lam = localize(state_of, [](const State& s) { return -s.r; });
        if (lam < best_lam) {
          best_lam = lam;
          term = Termination::ReachedSharp;
        }
      }
      if (stop_circle && full.r - 0.5 * full.a >= 0.0) {
        const double lam = localize(state_of, [](const State& s) { return s.r - 0.5 * s.a; });
        if (lam < best_lam) {
          best_lam = lam;
          term = Termination::ReachedCircle;
        }
      }
      if (full.a <= a_min) {
        const double lam = localize(state_of, [&](const State& s) { return a_min - s.a; });
        if (lam < best_lam) {
          best_lam = lam;
          term = Termination::ReachedAmin;
        }
      }
      if (term) {
        const State s = state_of(best_lam);
        a = s.a;
        r = *term == Termination::ReachedSharp ? std::max(s.r, 0.0) : s.r;
        push(a, r);
        traj.termination = *term;
        return traj;
      }
      a = full.a;
      r = full.r;
      push(a, r);
      if (a <= a_min) {
        traj.termination = Termination::ReachedAmin;
        return traj;
      }
    }
    if (a <= 0.0) {
      traj.termination = Termination::Vanished;
      return traj;
    }
  }
  throw step_collapse_error("integration exceeded the step budget");
}

}  // namespace abrade
