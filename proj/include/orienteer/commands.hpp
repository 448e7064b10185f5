#ifndef ORIENTEER_COMMANDS_HPP
#define ORIENTEER_COMMANDS_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "io.hpp"
#include "oracle.hpp"
#include "race_map.hpp"
#include "run_config.hpp"
#include "stationary.hpp"
#include "time_dependent.hpp"
#include "trajectory.hpp"

namespace orienteer {

/// Exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_input_error = 1, exit_not_converged = 2 };

/// Command-line inputs; flags override the matching configuration keys.
struct CommandOptions {
  std::string map_path;
  std::string config_path;
  std::string out_dir;
  std::optional<RunMode> mode;
  std::optional<Point> start;
  std::vector<double> budgets;
  std::optional<int> controls;
};

namespace detail {

inline RaceMap load_map(std::string const& path) {
  if (path.empty()) throw IoError("no map file given (--map)");
  if (!std::filesystem::exists(path)) throw IoError("map file not found: " + path);
  try {
    return parse_map(read_text(path));
  } catch (ParseError const& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline RunConfig load_run_config(CommandOptions const& opts) {
  RunConfig rc;
  if (!opts.config_path.empty()) {
    if (!std::filesystem::exists(opts.config_path)) throw IoError("config file not found: " + opts.config_path);
    try {
      rc = parse_run_config(read_text(opts.config_path));
    } catch (ConfigError const& e) {
      throw ConfigError(opts.config_path + ": " + e.what());
    }
  }
  if (opts.mode) rc.mode = *opts.mode;
  if (opts.start) rc.start = opts.start;
  if (!opts.budgets.empty()) rc.budgets = opts.budgets;
  if (opts.controls) rc.solver.n_controls = *opts.controls;
  if (!opts.out_dir.empty()) rc.out = opts.out_dir;
  return rc;
}

// Start point of a trace: off-obstacle, or snapped to the nearest free node.
inline Point resolve_start(RaceMap const& map, std::optional<Point> start, std::ostream& err) {
  if (!start) throw ConfigError("no start point given (--start x,y or 'start' in the config)");
  auto const& g = map.geometry;
  if (!g.inside(*start)) throw ConfigError("start point lies outside the map");
  Node const near = g.nearest(*start);
  if (!map.is_obstacle(near)) return *start;
  std::optional<Node> best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Node const n = g.node_at(i);
    if (map.is_obstacle(n)) continue;
    double const d = distance(*start, g.position(n));
    if (!best || d < best_d) {
      best = n;
      best_d = d;
    }
  }
  if (!best) throw ConfigError("map has no free node to start from");
  Point const snapped = g.position(*best);
  err << "warning: start lies on an obstacle; moved to the nearest free node (" << format_number(snapped.x) << ","
      << format_number(snapped.y) << ")\n";
  return snapped;
}

inline std::string out_dir_of(RunConfig const& rc) {
  if (rc.out.empty()) throw ConfigError("no output directory given (--out)");
  return rc.out;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (std::exception const& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
}

}  // namespace detail

/// Solves the race described by the map and configuration and writes the value
/// grids, manifest, map and configuration copies into the output directory.
/// Wall-clock time goes to timing.txt so that the manifest stays reproducible.
inline int cmd_solve(CommandOptions const& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    RaceMap const map = detail::load_map(opts.map_path);
    RunConfig rc = detail::load_run_config(opts);
    std::filesystem::path const dir = detail::out_dir_of(rc);
    rc.solver = rc.solver.resolved(map.dx());
    StateSpace const space(map.checkpoint_count(), race_mode(rc.mode));

    auto const begin = std::chrono::steady_clock::now();
    bool converged = true;
    if (rc.mode == RunMode::Score) {
      TimeValueField const field = solve_time(map, space, rc.solver);
      write_time_dump(dir, map, space, rc, field);
      converged = field.arrival_converged;
      out << "score race: " << field.slice_count() << " slices of dt=" << format_number(field.dt)
          << ", reward " << format_number(field.reward) << "\n";
    } else {
      ValueField const field = solve_stationary(map, space, rc.solver);
      write_stationary_dump(dir, map, space, rc, field);
      converged = field.converged;
      out << to_string(rc.mode) << " race: " << field.iterations << " iterations, residual "
          << format_number(field.residual) << (converged ? "" : " (not converged)") << "\n";
    }
    std::chrono::duration<double> const wall = std::chrono::steady_clock::now() - begin;
    detail::write_text(dir / "timing.txt", "wall_seconds = " + format_fixed(wall.count(), 3) + "\n");
    if (!converged) err << "warning: tolerance not reached; dumps written anyway\n";
    return converged ? exit_ok : exit_not_converged;
  });
}

inline int cmd_score_trace(CommandOptions const& opts, std::ostream& out, std::ostream& err);

/// Reconstructs the optimal race from a stationary solve and writes
/// trajectory.csv and report.txt next to the dumps.
inline int cmd_trace(CommandOptions const& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    if (opts.out_dir.empty()) throw ConfigError("no solver output directory given (--out)");
    std::filesystem::path const dir = opts.out_dir;
    LoadedDump const d = load_dump(dir);
    if (d.is_score) return cmd_score_trace(opts, out, err);
    Point const start = detail::resolve_start(d.map, opts.start ? opts.start : d.config.start, err);
    Trajectory const traj = reconstruct(d.stationary, d.map, d.space, d.config.solver, start, d.space.empty());
    RaceReport const report = race_report(traj, d.config.speed_kmh, d.config.map_scale);
    std::string const text = format_report(report);
    detail::write_text(dir / "trajectory.csv", trajectory_csv(traj, d.space));
    detail::write_text(dir / "report.txt", text);
    out << text;
    return traj.finished ? exit_ok : exit_not_converged;
  });
}

/// Score-race reconstructions, one per budget T' <= T, each starting at
/// t0 = T - T'. Writes trajectory_b{T'}.csv and report_b{T'}.txt.
inline int cmd_score_trace(CommandOptions const& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    if (opts.out_dir.empty()) throw ConfigError("no solver output directory given (--out)");
    std::filesystem::path const dir = opts.out_dir;
    LoadedDump const d = load_dump(dir);
    if (!d.is_score) throw ConfigError(dir.string() + " holds a stationary solve; use 'trace'");
    Point const start = detail::resolve_start(d.map, opts.start ? opts.start : d.config.start, err);
    std::vector<double> const budgets = opts.budgets.empty() ? d.config.budgets : opts.budgets;
    if (budgets.empty()) throw ConfigError("no budget given (--budget T' or 'budgets' in the config)");
    for (double b : budgets) {
      if (!(b > 0.0) || b > d.timed.horizon * (1 + 1e-12)) {
        throw ConfigError("budget " + format_number(b) + " must lie in (0, T] with T = " +
                          format_number(d.timed.horizon));
      }
    }
    for (double b : budgets) {
      Trajectory const traj = reconstruct(d.timed, d.map, d.space, d.config.solver, start, d.space.empty(),
                                          d.timed.horizon - b);
      RaceReport const report = race_report(traj, d.config.speed_kmh, d.config.map_scale);
      std::string text = "budget " + format_number(b) + ": " + std::to_string(report.visit_order.size()) +
                         " checkpoints, race time " + format_number(traj.total_time) + "\n";
      text += format_report(report);
      std::string const tag = "b" + format_number(b);
      detail::write_text(dir / ("trajectory_" + tag + ".csv"), trajectory_csv(traj, d.space));
      detail::write_text(dir / ("report_" + tag + ".txt"), text);
      out << text;
    }
    return exit_ok;
  });
}

/// Exhaustive tours for both race modes. Writes tour.csv into the output
/// directory when one is given, and always prints it.
inline int cmd_oracle(CommandOptions const& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    RaceMap const map = detail::load_map(opts.map_path);
    RunConfig const rc = detail::load_run_config(opts);
    Point const start = detail::resolve_start(map, rc.start, err);
    std::vector<std::pair<RaceMode, TourResult>> tours;
    for (RaceMode mode : {RaceMode::CrossCountry, RaceMode::FreeOrder}) {
      tours.emplace_back(mode, brute_force_tour(map, rc.solver, start, mode));
    }
    std::string const csv = tour_csv(tours);
    if (!rc.out.empty()) {
      std::filesystem::create_directories(rc.out);
      detail::write_text(std::filesystem::path(rc.out) / "tour.csv", csv);
    }
    out << csv;
    return exit_ok;
  });
}

}  // namespace orienteer

#endif  // ORIENTEER_COMMANDS_HPP
