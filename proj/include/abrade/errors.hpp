#pragma once

#include <stdexcept>
#include <string>

namespace abrade {

// The ODE right-hand side is singular at R = 0; callers are expected to
// switch to the inverse (da/dR) formulation there.
struct singular_state_error : std::domain_error {
  explicit singular_state_error(const std::string& what) : std::domain_error(what) {}
};

// dR/da vanishes, so da/dR has no finite value.
struct stationary_point_error : std::domain_error {
  explicit stationary_point_error(const std::string& what) : std::domain_error(what) {}
};

// A bracketed search was asked for a value the curve never attains.
struct no_root_error : std::runtime_error {
  explicit no_root_error(const std::string& what) : std::runtime_error(what) {}
};

// Event localization failed to converge within the iteration budget.
struct step_collapse_error : std::runtime_error {
  explicit step_collapse_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested marker-point step exceeds the stability bound.
struct step_too_large_error : std::invalid_argument {
  explicit step_too_large_error(const std::string& what) : std::invalid_argument(what) {}
};

// The evolving contour lost essentially all of its area.
struct degenerate_curve_error : std::runtime_error {
  explicit degenerate_curve_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad command line or config input; maps to exit status 2.
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace abrade
