#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "abrade/errors.hpp"
#include "abrade/geometry.hpp"
#include "abrade/numfmt.hpp"

namespace abrade {

// Perimeter-averaged radius of a rounded polygonal abrader. The average
// curvature over one perimeter is 2*pi/P*, so this equals P*/(2*pi).
inline double average_abrader_radius(int n_star, double a_star, double r_star) {
  RoundedPolygon abrader(n_star, a_star, r_star);  // validates feasibility
  const PolygonConstants pc = abrader.constants;
  return r_star + pc.k * (0.5 * a_star - r_star);
}

// Collision-probability weighted mean radius of a set of circular abraders.
inline double mixture_radius(const std::vector<std::pair<double, double>>& components) {
  if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
  double psum = 0.0;
  double mean = 0.0;
  for (const auto& [p, r] : components) {
    if (p < 0.0) throw std::invalid_argument("mixture probability must be non-negative");
    if (r < 0.0) throw std::invalid_argument("abrader radius must be non-negative");
    psum += p;
    mean += p * r;
  }
  if (std::abs(psum - 1.0) > 1e-12)
    throw std::invalid_argument("mixture probabilities sum to " + std::to_string(psum) + ", expected 1");
  return mean;
}

// Abrader models. Every environment reduces, at a given fragment state
// (r, a) of an n-fold fragment, to one effective circular-abrader radius.
class Environment {
 public:
  struct Constant {
    double r_star;
  };
  struct Dust {};
  struct Mixture {
    std::vector<std::pair<double, double>> components;
    double reduced;
  };
  struct Polygonal {
    int n_star;
    double a_star;
    double r_star;
    double reduced;
  };
  struct Stationary {
    double r_target;
  };
  struct Homothetic {};
  struct SelfDual {};
  struct Mixed {
    double p;
  };

  static Environment constant(double r_star) {
    if (r_star < 0.0) throw std::invalid_argument("abrader radius must be non-negative");
    return Environment(Constant{r_star});
  }
  static Environment dust() { return Environment(Dust{}); }
  static Environment mixture(std::vector<std::pair<double, double>> components) {
    const double reduced = mixture_radius(components);
    return Environment(Mixture{std::move(components), reduced});
  }
  static Environment polygonal(int n_star, double a_star, double r_star) {
    const double reduced = average_abrader_radius(n_star, a_star, r_star);
    return Environment(Polygonal{n_star, a_star, r_star, reduced});
  }
  static Environment stationary(double r_target) {
    if (!(r_target > 0.0)) throw std::invalid_argument("stationary target radius must be positive");
    return Environment(Stationary{r_target});
  }
  static Environment homothetic() { return Environment(Homothetic{}); }
  static Environment self_dual() { return Environment(SelfDual{}); }
  static Environment mixed(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("self-dual collision probability must be in (0, 1]");
    return Environment(Mixed{p});
  }

  // Effective circular-abrader radius at fragment state (r, a). The
  // self-dual variants divide through by r in the flow equations, so r = 0
  // is rejected for them; integrators use sharp_limit_radius there.
  double effective_radius(int n, double r, double a) const {
    const PolygonConstants pc = polygon_constants(n);
    return std::visit(
        [&](const auto& env) -> double {
          using T = std::decay_t<decltype(env)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return env.r_star;
          } else if constexpr (std::is_same_v<T, Dust>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, Mixture>) {
            return env.reduced;
          } else if constexpr (std::is_same_v<T, Polygonal>) {
            return env.reduced;
          } else if constexpr (std::is_same_v<T, Stationary>) {
            return -(env.r_target * pc.c);
          } else if constexpr (std::is_same_v<T, Homothetic>) {
            return (-pc.c) * r * (a - 2.0 * r) / a;
          } else if constexpr (std::is_same_v<T, SelfDual>) {
            if (r == 0.0) throw singular_state_error("self-dual abrader is singular at r = 0");
            return r + pc.k * (0.5 * a - r);
          } else {
            static_assert(std::is_same_v<T, Mixed>);
            if (r == 0.0) throw singular_state_error("mixed self-dual abrader is singular at r = 0");
            return env.p * (r + pc.k * (0.5 * a - r));
          }
        },
        kind_);
  }

  // Limit of effective_radius as r -> 0+, finite for every model.
  double sharp_limit_radius(int n, double a) const {
    const PolygonConstants pc = polygon_constants(n);
    return std::visit(
        [&](const auto& env) -> double {
          using T = std::decay_t<decltype(env)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return env.r_star;
          } else if constexpr (std::is_same_v<T, Dust>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, Mixture>) {
            return env.reduced;
          } else if constexpr (std::is_same_v<T, Polygonal>) {
            return env.reduced;
          } else if constexpr (std::is_same_v<T, Stationary>) {
            return -(env.r_target * pc.c);
          } else if constexpr (std::is_same_v<T, Homothetic>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, SelfDual>) {
            return pc.k * 0.5 * a;
          } else {
            static_assert(std::is_same_v<T, Mixed>);
            return env.p * pc.k * 0.5 * a;
          }
        },
        kind_);
  }

  // The self-dual family stays meaningful past the circle line (the flow is
  // continued there for analysis); every other model terminates on it.
  bool circle_terminates() const {
    return !(std::holds_alternative<SelfDual>(kind_) || std::holds_alternative<Mixed>(kind_));
  }

  // Canonical grammar string; parse_environment(describe()) reproduces the
  // environment exactly.
  std::string describe() const {
    return std::visit(
        [](const auto& env) -> std::string {
          using T = std::decay_t<decltype(env)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return "constant:" + format_double_short(env.r_star);
          } else if constexpr (std::is_same_v<T, Dust>) {
            return "dust";
          } else if constexpr (std::is_same_v<T, Mixture>) {
            std::string out = "mixture:";
            bool first = true;
            for (const auto& [p, r] : env.components) {
              if (!first) out += ',';
              out += format_double_short(p) + ":" + format_double_short(r);
              first = false;
            }
            return out;
          } else if constexpr (std::is_same_v<T, Polygonal>) {
            return "polygonal:" + std::to_string(env.n_star) + ":" + format_double_short(env.a_star) + ":" +
                   format_double_short(env.r_star);
          } else if constexpr (std::is_same_v<T, Stationary>) {
            return "stationary:" + format_double_short(env.r_target);
          } else if constexpr (std::is_same_v<T, Homothetic>) {
            return "homothetic";
          } else if constexpr (std::is_same_v<T, SelfDual>) {
            return "selfdual";
          } else {
            static_assert(std::is_same_v<T, Mixed>);
            return "mixed:" + format_double_short(env.p);
          }
        },
        kind_);
  }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(kind_);
  }

 private:
  using Kind = std::variant<Constant, Dust, Mixture, Polygonal, Stationary, Homothetic, SelfDual, Mixed>;
  explicit Environment(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(text.substr(pos));
      return out;
    }
    out.emplace_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
}

inline double parse_number(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("malformed number: '" + std::string(token) + "'");
  return value;
}

inline long parse_integer(std::string_view token) {
  long value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("malformed integer: '" + std::string(token) + "'");
  return value;
}

}  // namespace detail

// Environment grammar:
//   constant:<r> | dust | mixture:<p1>:<r1>,<p2>:<r2>,... |
//   polygonal:<n*>:<a*>:<r*> | stationary:<Rtarget> | homothetic |
//   selfdual | mixed:<p>
inline Environment parse_environment(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string head(text.substr(0, colon));
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  try {
    if (head == "dust") {
      if (colon != std::string_view::npos) throw std::invalid_argument("dust takes no parameters");
      return Environment::dust();
    }
    if (head == "homothetic") {
      if (colon != std::string_view::npos) throw std::invalid_argument("homothetic takes no parameters");
      return Environment::homothetic();
    }
    if (head == "selfdual") {
      if (colon != std::string_view::npos) throw std::invalid_argument("selfdual takes no parameters");
      return Environment::self_dual();
    }
    if (head == "constant") return Environment::constant(detail::parse_number(rest));
    if (head == "stationary") return Environment::stationary(detail::parse_number(rest));
    if (head == "mixed") return Environment::mixed(detail::parse_number(rest));
    if (head == "polygonal") {
      const auto parts = detail::split(rest, ':');
      if (parts.size() != 3) throw std::invalid_argument("polygonal:<n*>:<a*>:<r*> expected");
      return Environment::polygonal(static_cast<int>(detail::parse_integer(parts[0])),
                                    detail::parse_number(parts[1]), detail::parse_number(parts[2]));
    }
    if (head == "mixture") {
      std::vector<std::pair<double, double>> components;
      for (const auto& item : detail::split(rest, ',')) {
        const auto pr = detail::split(item, ':');
        if (pr.size() != 2) throw std::invalid_argument("mixture component '" + item + "' is not <p>:<r>");
        components.emplace_back(detail::parse_number(pr[0]), detail::parse_number(pr[1]));
      }
      return Environment::mixture(std::move(components));
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("bad environment '" + std::string(text) + "': " + e.what());
  }
  throw std::invalid_argument("unknown environment kind: '" + std::string(text) + "'");
}

}  // namespace abrade
