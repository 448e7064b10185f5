#ifndef ORIENTEER_RUN_CONFIG_HPP
#define ORIENTEER_RUN_CONFIG_HPP

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "grid.hpp"
#include "states.hpp"
#include "text.hpp"

namespace orienteer {

enum class RunMode { Cross, Free, Score };

inline std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Cross: return "cross";
    case RunMode::Free: return "free";
    case RunMode::Score: return "score";
  }
  return "?";
}

inline RunMode parse_run_mode(std::string_view s) {
  if (s == "cross") return RunMode::Cross;
  if (s == "free") return RunMode::Free;
  if (s == "score") return RunMode::Score;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected cross, free or score)");
}

inline RaceMode race_mode(RunMode mode) {
  return mode == RunMode::Cross ? RaceMode::CrossCountry : RaceMode::FreeOrder;
}

/// One "key = value" line of a flat configuration file.
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Reads "key = value" lines; '#' starts a comment, blank lines are skipped.
inline std::vector<KeyValue> parse_key_values(std::istream& in) {
  std::vector<KeyValue> out;
  int n = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++n;
    std::string_view line = raw;
    if (auto const hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto const eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(n) + ": expected 'key = value'");
    }
    std::string_view const key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(n) + ": empty key");
    out.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), n});
  }
  return out;
}

/// Everything a command-line run needs besides the map.
struct RunConfig {
  SolverConfig solver;
  RunMode mode = RunMode::Free;
  std::optional<Point> start;
  std::vector<double> budgets;
  double speed_kmh = 8.0;
  double map_scale = 1.0;  ///< meters per map unit
  std::string out;
};

inline Point parse_point(std::string_view s) {
  auto const parts = split(s, ',');
  if (parts.size() == 2) {
    auto const x = parse_number<double>(parts[0]);
    auto const y = parse_number<double>(parts[1]);
    if (x && y) return {*x, *y};
  }
  throw ConfigError("expected a point 'x,y', got '" + std::string(s) + "'");
}

namespace detail {

template <class T>
T require_number(KeyValue const& kv) {
  auto const v = parse_number<T>(kv.value);
  if (!v) {
    throw ConfigError("line " + std::to_string(kv.line) + ": bad value '" + kv.value + "' for " + kv.key);
  }
  return *v;
}

inline bool require_bool(KeyValue const& kv) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  throw ConfigError("line " + std::to_string(kv.line) + ": " + kv.key + " must be true or false");
}

}  // namespace detail

/// Applies one key to a run configuration; unknown keys are errors.
inline void apply_setting(RunConfig& rc, KeyValue const& kv) {
  using detail::require_bool;
  using detail::require_number;
  SolverConfig& s = rc.solver;
  std::string const& k = kv.key;
  if (k == "lambda") s.lambda = require_number<double>(kv);
  else if (k == "h") s.h = require_number<double>(kv);
  else if (k == "dt") s.dt = require_number<double>(kv);
  else if (k == "eps") s.eps_run = s.eps_switch = require_number<double>(kv);
  else if (k == "eps_run") s.eps_run = require_number<double>(kv);
  else if (k == "eps_switch") s.eps_switch = require_number<double>(kv);
  else if (k == "n_controls") s.n_controls = require_number<int>(kv);
  else if (k == "include_zero_control") s.include_zero_control = require_bool(kv);
  else if (k == "lattice_controls") s.lattice_controls = require_bool(kv);
  else if (k == "tol") s.tol = require_number<double>(kv);
  else if (k == "max_iters") s.max_iters = require_number<int>(kv);
  else if (k == "threads") s.threads = require_number<int>(kv);
  else if (k == "horizon") s.horizon = require_number<double>(kv);
  else if (k == "reward") s.reward = require_number<double>(kv);
  else if (k == "late_cost") s.late_cost = require_number<double>(kv);
  else if (k == "partial_finish") s.partial_finish = require_bool(kv);
  else if (k == "sweep") {
    if (kv.value == "jacobi") s.sweep = Sweep::Jacobi;
    else if (kv.value == "gauss-seidel") s.sweep = Sweep::GaussSeidel;
    else throw ConfigError("line " + std::to_string(kv.line) + ": sweep must be jacobi or gauss-seidel");
  } else if (k == "mode") rc.mode = parse_run_mode(kv.value);
  else if (k == "start") rc.start = parse_point(kv.value);
  else if (k == "budgets") {
    rc.budgets.clear();
    for (auto part : split(kv.value, ',')) {
      rc.budgets.push_back(require_number<double>({kv.key, std::string(trim(part)), kv.line}));
    }
  } else if (k == "speed_kmh") rc.speed_kmh = require_number<double>(kv);
  else if (k == "map_scale") rc.map_scale = require_number<double>(kv);
  else if (k == "out") rc.out = kv.value;
  else throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + k + "'");
}

inline RunConfig parse_run_config(std::istream& in) {
  RunConfig rc;
  for (auto const& kv : parse_key_values(in)) apply_setting(rc, kv);
  return rc;
}

inline RunConfig parse_run_config(std::string const& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

/// Canonical text form; parse_run_config reads it back to the same values.
inline std::string serialize_run_config(RunConfig const& rc) {
  SolverConfig const& s = rc.solver;
  std::ostringstream o;
  auto line = [&](std::string_view key, std::string const& value) { o << key << " = " << value << '\n'; };
  auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };
  line("mode", std::string(to_string(rc.mode)));
  line("lambda", format_number(s.lambda));
  line("h", format_number(s.h));
  line("dt", format_number(s.dt));
  line("eps_run", format_number(s.eps_run));
  line("eps_switch", format_number(s.eps_switch));
  line("n_controls", std::to_string(s.n_controls));
  line("include_zero_control", boolean(s.include_zero_control));
  line("lattice_controls", boolean(s.lattice_controls));
  line("tol", format_number(s.tol));
  line("max_iters", std::to_string(s.max_iters));
  line("sweep", s.sweep == Sweep::Jacobi ? "jacobi" : "gauss-seidel");
  line("threads", std::to_string(s.threads));
  line("horizon", format_number(s.horizon));
  line("reward", format_number(s.reward));
  line("late_cost", format_number(s.late_cost));
  line("partial_finish", boolean(s.partial_finish));
  if (rc.start) line("start", format_number(rc.start->x) + "," + format_number(rc.start->y));
  if (!rc.budgets.empty()) {
    std::string b;
    for (double v : rc.budgets) b += (b.empty() ? "" : ",") + format_number(v);
    line("budgets", b);
  }
  line("speed_kmh", format_number(rc.speed_kmh));
  line("map_scale", format_number(rc.map_scale));
  return o.str();
}

}  // namespace orienteer

#endif  // ORIENTEER_RUN_CONFIG_HPP
