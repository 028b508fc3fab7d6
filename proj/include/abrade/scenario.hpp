#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "abrade/environment.hpp"
#include "abrade/errors.hpp"
#include "abrade/geometry.hpp"
#include "abrade/numfmt.hpp"

namespace abrade::cli {

enum class Kind { Simulate, Pde, Compare, Branches, Render };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::Simulate: return "simulate";
    case Kind::Pde: return "pde";
    case Kind::Compare: return "compare";
    case Kind::Branches: return "branches";
    case Kind::Render: return "render";
  }
  return "?";
}

// One validated batch item. Defaults of 0 on h/a_min mean "module default";
// circle_stop -1 leaves the decision to the environment.
struct Scenario {
  Kind kind = Kind::Simulate;

  // fragment + ODE integration
  int n = 4;
  double a0 = 1.0;
  double r0 = 0.0;
  std::string env = "dust";
  double h = 0.0;
  double a_min = 0.0;
  double slope_swap = 1.0;
  double event_tol = 1e-12;
  int circle_stop = -1;

  // PDE scenarios
  double c = 0.1;
  int w0 = 1;
  int points = 1024;
  double r_seed = 0.0;  // 0 selects the module default of 0.005 * a0
  int snapshot_every = 50;
  double i_proj_min = 0.0;
  std::string snapshots_out;

  // compare
  std::string ode_csv;
  std::string pde_csv;

  // branches
  std::vector<int> n_list{3, 4, 5, 6, 7, 8, 9, 10};
  double p_min = 0.005;
  double p_max = 0.25;
  int p_count = 100;

  // render
  std::string mode;
  std::vector<std::string> inputs;
  double rstar = 0.0;
  int contour_count = 6;

  std::string out;
};

namespace detail {

using abrade::detail::parse_integer;
using abrade::detail::parse_number;
using abrade::detail::split;

inline const std::map<std::string, std::set<std::string>>& key_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"simulate", {"n", "a0", "r0", "env", "h", "a-min", "slope-swap", "event-tol", "circle-stop", "out"}},
      {"pde",
       {"n", "a0", "r0", "c", "w0", "N", "r-seed", "a-min", "i-proj-min", "snapshot-every", "snapshots", "out"}},
      {"compare", {"ode", "pde", "out"}},
      {"branches", {"n-list", "p-min", "p-max", "p-count", "out"}},
      {"render", {"mode", "in", "out", "rstar", "n", "count"}},
  };
  return schema;
}

inline std::string json_value_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) return format_double_short(v.get<double>());
  throw usage_error("config values must be scalars, got: " + v.dump());
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& tok : split(text, ','))
    out.push_back(static_cast<int>(parse_integer(tok)));
  return out;
}

}  // namespace detail

// Parses "<subcommand> --key value ..." with an optional "--config file.json"
// whose flat keys mirror the flags; explicit flags win. Unknown keys are
// errors, and every referenced parameter is validated before any run starts.
inline Scenario parse_scenario(const std::vector<std::string>& args) {
  using detail::key_schema;
  if (args.empty()) throw usage_error("missing subcommand (simulate | pde | compare | branches | render)");
  const std::string& sub = args.front();
  const auto schema_it = key_schema().find(sub);
  if (schema_it == key_schema().end()) throw usage_error("unknown subcommand: '" + sub + "'");
  const auto& allowed = schema_it->second;

  std::map<std::string, std::string> kv;
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string token = args[i];
    if (token.rfind("--", 0) != 0) throw usage_error("expected a --flag, got: '" + token + "'");
    std::string key = token.substr(2);
    std::string value;
    const std::size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw usage_error("flag '" + token + "' is missing a value");
      value = args[++i];
    }
    if (key == "config") {
      config_path = value;
      continue;
    }
    if (!allowed.count(key)) throw usage_error("unknown flag for " + sub + ": '--" + key + "'");
    if (!kv.emplace(key, value).second) throw usage_error("duplicate flag: '--" + key + "'");
  }

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw usage_error("cannot open config file: " + config_path);
    nlohmann::json cfg;
    try {
      in >> cfg;
    } catch (const nlohmann::json::exception& e) {
      throw usage_error(std::string("malformed config JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw usage_error("config must be a flat JSON object");
    for (const auto& [key, value] : cfg.items()) {
      if (!allowed.count(key)) throw usage_error("unknown config key for " + sub + ": '" + key + "'");
      kv.emplace(key, detail::json_value_to_string(value));  // flags override
    }
  }

  Scenario s;
  auto take = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  try {
    auto num = [&](const char* key, double& field) {
      if (auto v = take(key)) field = detail::parse_number(*v);
    };
    auto integer = [&](const char* key, int& field) {
      if (auto v = take(key)) field = static_cast<int>(detail::parse_integer(*v));
    };
    auto text = [&](const char* key, std::string& field) {
      if (auto v = take(key)) field = *v;
    };

    if (sub == "simulate") {
      s.kind = Kind::Simulate;
      integer("n", s.n);
      num("a0", s.a0);
      num("r0", s.r0);
      text("env", s.env);
      num("h", s.h);
      num("a-min", s.a_min);
      num("slope-swap", s.slope_swap);
      num("event-tol", s.event_tol);
      integer("circle-stop", s.circle_stop);
      text("out", s.out);
      if (s.out.empty()) throw usage_error("simulate requires --out");
      parse_environment(s.env);              // validates the grammar and parameters
      RoundedPolygon check(s.n, s.a0, s.r0);  // validates the initial shape
      (void)check;
    } else if (sub == "pde") {
      s.kind = Kind::Pde;
      integer("n", s.n);
      num("a0", s.a0);
      num("r0", s.r0);
      num("c", s.c);
      integer("w0", s.w0);
      integer("N", s.points);
      num("r-seed", s.r_seed);
      num("a-min", s.a_min);
      num("i-proj-min", s.i_proj_min);
      integer("snapshot-every", s.snapshot_every);
      text("snapshots", s.snapshots_out);
      text("out", s.out);
      if (s.out.empty()) throw usage_error("pde requires --out");
      if (s.w0 != 0 && s.w0 != 1) throw usage_error("--w0 must be 0 or 1");
      if (s.c < 0.0) throw usage_error("--c must be non-negative");
      if (s.points < 64) throw usage_error("--N must be at least 64");
      if (s.a_min <= 0.0 && s.i_proj_min <= 0.0) throw usage_error("pde requires --a-min or --i-proj-min");
      RoundedPolygon check(s.n, s.a0, s.r0);
      (void)check;
    } else if (sub == "compare") {
      s.kind = Kind::Compare;
      text("ode", s.ode_csv);
      text("pde", s.pde_csv);
      text("out", s.out);
      if (s.ode_csv.empty() || s.pde_csv.empty()) throw usage_error("compare requires --ode and --pde");
    } else if (sub == "branches") {
      s.kind = Kind::Branches;
      if (auto v = take("n-list")) s.n_list = detail::parse_int_list(*v);
      num("p-min", s.p_min);
      num("p-max", s.p_max);
      integer("p-count", s.p_count);
      text("out", s.out);
      if (s.out.empty()) throw usage_error("branches requires --out");
      if (s.n_list.empty()) throw usage_error("branches requires a non-empty --n-list");
      for (int n : s.n_list)
        if (n < 3) throw usage_error("--n-list entries must be at least 3");
      if (!(s.p_min > 0.0 && s.p_max <= 1.0 && s.p_min <= s.p_max))
        throw usage_error("branches requires 0 < p-min <= p-max <= 1");
      if (s.p_count < 1) throw usage_error("--p-count must be positive");
    } else {
      s.kind = Kind::Render;
      text("mode", s.mode);
      if (auto v = take("in")) s.inputs = detail::split(*v, ',');
      text("out", s.out);
      num("rstar", s.rstar);
      integer("n", s.n);
      integer("count", s.contour_count);
      if (s.mode != "ra_flow" && s.mode != "contours" && s.mode != "branches")
        throw usage_error("--mode must be ra_flow, contours or branches");
      if (s.inputs.empty()) throw usage_error("render requires --in");
      if (s.out.empty()) throw usage_error("render requires --out");
      if (s.contour_count < 1) throw usage_error("--count must be positive");
    }
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception& e) {
    throw usage_error(e.what());
  }
  return s;
}

// The flag vector that parses back to exactly this scenario.
inline std::vector<std::string> emit_args(const Scenario& s) {
  std::vector<std::string> args{to_string(s.kind)};
  auto add = [&](const char* key, const std::string& value) {
    args.emplace_back(std::string("--") + key);
    args.push_back(value);
  };
  switch (s.kind) {
    case Kind::Simulate:
      add("n", std::to_string(s.n));
      add("a0", format_double_short(s.a0));
      add("r0", format_double_short(s.r0));
      add("env", s.env);
      add("h", format_double_short(s.h));
      add("a-min", format_double_short(s.a_min));
      add("slope-swap", format_double_short(s.slope_swap));
      add("event-tol", format_double_short(s.event_tol));
      add("circle-stop", std::to_string(s.circle_stop));
      add("out", s.out);
      break;
    case Kind::Pde:
      add("n", std::to_string(s.n));
      add("a0", format_double_short(s.a0));
      add("r0", format_double_short(s.r0));
      add("c", format_double_short(s.c));
      add("w0", std::to_string(s.w0));
      add("N", std::to_string(s.points));
      add("r-seed", format_double_short(s.r_seed));
      add("a-min", format_double_short(s.a_min));
      add("i-proj-min", format_double_short(s.i_proj_min));
      add("snapshot-every", std::to_string(s.snapshot_every));
      if (!s.snapshots_out.empty()) add("snapshots", s.snapshots_out);
      add("out", s.out);
      break;
    case Kind::Compare:
      add("ode", s.ode_csv);
      add("pde", s.pde_csv);
      if (!s.out.empty()) add("out", s.out);
      break;
    case Kind::Branches: {
      std::string list;
      for (std::size_t i = 0; i < s.n_list.size(); ++i)
        list += (i ? "," : "") + std::to_string(s.n_list[i]);
      add("n-list", list);
      add("p-min", format_double_short(s.p_min));
      add("p-max", format_double_short(s.p_max));
      add("p-count", std::to_string(s.p_count));
      add("out", s.out);
      break;
    }
    case Kind::Render: {
      add("mode", s.mode);
      std::string list;
      for (std::size_t i = 0; i < s.inputs.size(); ++i) list += (i ? "," : "") + s.inputs[i];
      add("in", list);
      add("out", s.out);
      add("rstar", format_double_short(s.rstar));
      add("n", std::to_string(s.n));
      add("count", std::to_string(s.contour_count));
      break;
    }
  }
  return args;
}

}  // namespace abrade::cli
