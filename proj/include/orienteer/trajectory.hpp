#ifndef ORIENTEER_TRAJECTORY_HPP
#define ORIENTEER_TRAJECTORY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "cost.hpp"
#include "race_map.hpp"
#include "scheme.hpp"
#include "states.hpp"
#include "text.hpp"
#include "time_dependent.hpp"

namespace orienteer {

struct TrajectorySample {
  double t = 0.0;
  Point x;
  StateMask q;
  Point u;  ///< control applied on the step that ended here
};

struct SwitchEvent {
  double t = 0.0;
  Point x;
  StateMask before;
  StateMask after;
  std::size_t sample = 0;  ///< index of the sample at which the switch fired
};

/// Feedback trajectory: positions at every step plus the discrete switches.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<SwitchEvent> switch_events;
  double total_time = 0.0;
  double total_length = 0.0;
  bool finished = false;

  /// Checkpoints (1-based) in the order their bits flipped.
  std::vector<std::size_t> visit_order() const {
    std::vector<std::size_t> out;
    for (auto const& e : switch_events) {
      for (std::size_t j : newly_visited(e.before, e.after)) out.push_back(j + 1);
    }
    return out;
  }
};

struct TraceOptions {
  double switch_tol = -1.0;   ///< negative: use the solver tolerance
  std::size_t max_steps = 0;  ///< 0: derived from the start value
};

namespace detail {

// Cheapest permitted switch at x, by direct enumeration (ties to the smallest
// canonical index).
template <class ValueAt>
std::optional<std::pair<double, StateMask>> cheapest_switch(ValueAt&& value_at, StateSpace const& space,
                                                            RaceMap const& map, SwitchCost const& cost, Point x,
                                                            StateMask q) {
  std::optional<std::pair<double, StateMask>> best;
  for (StateMask next : permitted_switches(space, q)) {
    double const v = value_at(space.index_of(next)) + switching_cost(cost, space, map, x, q, next);
    if (!best || v < best->first) best = std::make_pair(v, next);
  }
  return best;
}

// Fires switches at x while the switch branch is within tol of the current
// value. Returns the new state.
template <class ValueAt>
StateMask fire_switches(Trajectory& traj, ValueAt&& value_at, StateSpace const& space, RaceMap const& map,
                        SwitchCost const& cost, double t, Point x, StateMask q, double tol) {
  for (std::size_t guard = 0; guard <= space.checkpoint_count(); ++guard) {
    auto const best = cheapest_switch(value_at, space, map, cost, x, q);
    if (!best || best->first > value_at(space.index_of(q)) + tol) break;
    traj.switch_events.push_back({t, x, q, best->second, traj.samples.size()});
    q = best->second;
    traj.samples.push_back({t, x, q, {}});
  }
  return q;
}

inline void advance(Trajectory& traj, double& t, Point& x, Point landing, double step, StateMask q) {
  traj.total_length += distance(x, landing);
  Point const u{(landing.x - x.x) / step, (landing.y - x.y) / step};
  t += step;
  x = landing;
  traj.samples.push_back({t, x, q, u});
}

}  // namespace detail

/// Reconstructs the feedback trajectory of a stationary race from (x0, q0).
///
/// At every step the switch test runs first (repeatedly, for coincident
/// switches); otherwise the player moves to the foot attaining the
/// semi-Lagrangian minimum. Stops when the arrival cell is reached in the
/// terminal state or when the step cap is hit (finished == false).
inline Trajectory reconstruct(ValueField const& field, RaceMap const& map, StateSpace const& space,
                              SolverConfig const& config, Point x0, StateMask q0, TraceOptions const& opts = {}) {
  SolverConfig const cfg = config.resolved(map.dx());
  auto const& g = map.geometry;
  ControlSet const controls(cfg.n_controls, cfg.include_zero_control, cfg.lattice_controls, cfg.h, map.dx());
  SwitchCost const cost = cfg.switch_cost(false);
  double const tol = opts.switch_tol >= 0.0 ? opts.switch_tol : cfg.tol;

  Trajectory traj;
  Point x = g.clamp(x0);
  StateMask q = q0;
  double t = 0.0;
  std::size_t cap = opts.max_steps;
  if (cap == 0) {
    double const v0 = std::min(interpolate(field[space.index_of(q)], g, x), field.upper_bound);
    cap = static_cast<std::size_t>(10.0 * v0 / cfg.h) + 10 * (g.rows + g.cols);
  }
  traj.samples.push_back({t, x, q, {}});

  for (std::size_t steps = 0;; ++steps) {
    auto value_at = [&](std::size_t state) { return interpolate(field[state], g, x); };
    q = detail::fire_switches(traj, value_at, space, map, cost, t, x, q, tol);
    if (q == space.full() && map.in_arrival_cell(x)) {
      traj.finished = true;
      break;
    }
    if (steps >= cap) break;
    Point landing;
    best_foot_at(field[space.index_of(q)], g, controls, x, &landing);
    detail::advance(traj, t, x, landing, cfg.h, q);
  }
  traj.total_time = t;
  return traj;
}

/// Reconstructs a score-race trajectory starting at time t0 = T - budget.
///
/// Steps of dt use the value slices interpolated linearly in time. The race
/// ends at the arrival once finishing is no worse than continuing, or at T.
inline Trajectory reconstruct(TimeValueField const& field, RaceMap const& map, StateSpace const& space,
                              SolverConfig const& config, Point x0, StateMask q0, double t0,
                              TraceOptions const& opts = {}) {
  SolverConfig const cfg = config.resolved(map.dx());
  auto const& g = map.geometry;
  ControlSet const controls(cfg.n_controls, cfg.include_zero_control, cfg.lattice_controls, field.dt, map.dx());
  SwitchCost const cost{cfg.eps_switch, field.reward};
  CostField const running(map, cfg.eps_run);
  double const decay = std::exp(-cfg.lambda * field.dt);
  double const tol = opts.switch_tol >= 0.0 ? opts.switch_tol : cfg.tol;

  Trajectory traj;
  Point x = g.clamp(x0);
  StateMask q = q0;
  double t = t0;
  double const start = t0;
  traj.samples.push_back({t, x, q, {}});

  while (true) {
    auto value_at = [&](std::size_t state) { return field.value(g, t, x, state); };
    q = detail::fire_switches(traj, value_at, space, map, cost, t, x, q, tol);
    bool const at_arrival = map.in_arrival_cell(x);
    if (at_arrival && q == space.full()) {
      traj.finished = true;
      break;
    }
    if (t >= field.horizon - 1e-9 * field.dt) {
      traj.finished = at_arrival;
      break;
    }
    std::size_t const state = space.index_of(q);
    Point landing;
    auto const later = [&](Point y) { return field.value(g, t + field.dt, y, state); };
    ControlChoice const move = best_move(later, g, controls, x, &landing);
    if (at_arrival && field.partial_finish) {
      double const go_on = field.dt * running.values[g.linear(g.nearest(x))] + decay * move.value;
      if (0.0 <= go_on + tol) {
        traj.finished = true;
        break;
      }
    }
    detail::advance(traj, t, x, landing, field.dt, q);
  }
  traj.total_time = t - start;
  return traj;
}

/// One stretch of the race between consecutive events.
struct Leg {
  std::size_t from = 0;  ///< checkpoint number, 0 for the start
  std::size_t to = 0;    ///< checkpoint number, 0 for the arrival
  double length = 0.0;   ///< map units
  double distance_km = 0.0;
  double time_min = 0.0;
};

struct RaceReport {
  bool complete = false;
  std::vector<std::size_t> visit_order;
  std::vector<Leg> legs;
  double length = 0.0;
  double distance_km = 0.0;
  double time_min = 0.0;
};

/// Converts a trajectory into physical distance and time at a given running
/// speed; map_scale is meters per map unit.
inline RaceReport race_report(Trajectory const& traj, double speed_kmh, double map_scale) {
  if (!(speed_kmh > 0.0)) throw ConfigError("speed must be positive");
  if (!(map_scale > 0.0)) throw ConfigError("map scale must be positive");
  auto const to_km = [&](double len) { return len * map_scale / 1000.0; };
  auto const to_min = [&](double len) { return to_km(len) / speed_kmh * 60.0; };

  RaceReport r;
  r.complete = traj.finished;
  r.visit_order = traj.visit_order();
  r.length = traj.total_length;
  r.distance_km = to_km(r.length);
  r.time_min = to_min(r.length);

  std::size_t event = 0;
  Leg leg;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    leg.length += distance(traj.samples[i - 1].x, traj.samples[i].x);
    while (event < traj.switch_events.size() && traj.switch_events[event].sample == i) {
      for (std::size_t j : newly_visited(traj.switch_events[event].before, traj.switch_events[event].after)) {
        leg.to = j + 1;
        leg.distance_km = to_km(leg.length);
        leg.time_min = to_min(leg.length);
        r.legs.push_back(leg);
        leg = Leg{j + 1, 0, 0.0, 0.0, 0.0};
      }
      ++event;
    }
  }
  leg.distance_km = to_km(leg.length);
  leg.time_min = to_min(leg.length);
  r.legs.push_back(leg);
  return r;
}

inline std::string format_report(RaceReport const& r) {
  std::string out = format_fixed(r.time_min, 2) + " min, " + format_fixed(r.distance_km, 2) + " km";
  out += r.complete ? "\n" : " (incomplete)\n";
  out += "visit order:";
  for (std::size_t j : r.visit_order) out += " " + std::to_string(j);
  out += "\n";
  for (auto const& leg : r.legs) {
    out += "leg " + (leg.from ? std::to_string(leg.from) : std::string("start")) + " -> " +
           (leg.to ? std::to_string(leg.to) : std::string("arrival")) + ": " + format_fixed(leg.distance_km, 3) +
           " km, " + format_fixed(leg.time_min, 2) + " min\n";
  }
  return out;
}

}  // namespace orienteer

#endif  // ORIENTEER_TRAJECTORY_HPP
