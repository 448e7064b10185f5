#ifndef ORIENTEER_TIME_DEPENDENT_HPP
#define ORIENTEER_TIME_DEPENDENT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "config.hpp"
#include "interpolate.hpp"
#include "parallel.hpp"
#include "race_map.hpp"
#include "scheme.hpp"
#include "states.hpp"
#include "stationary.hpp"

namespace orienteer {

/// Value of the score race on [0, T]: slices[k][state] holds V(T - k*dt, ., q).
struct TimeValueField {
  double horizon = 0.0;
  double dt = 0.0;
  double reward = 0.0;
  double late_cost = 0.0;
  bool partial_finish = true;
  ScalarGrid arrival_time;  ///< discrete minimal time to the arrival, used at T
  bool arrival_converged = false;
  std::vector<std::vector<ScalarGrid>> slices;

  std::size_t slice_count() const { return slices.size(); }
  double time_of(std::size_t k) const { return horizon - static_cast<double>(k) * dt; }

  /// V(t, x, q), linear in time between slices, bilinear in space.
  double value(GridGeometry const& g, double t, Point x, std::size_t state) const {
    double const back = std::clamp((horizon - t) / dt, 0.0, static_cast<double>(slices.size() - 1));
    auto k0 = static_cast<std::size_t>(std::floor(back));
    if (k0 + 1 >= slices.size()) k0 = slices.size() - 1;
    double const w = back - static_cast<double>(k0);
    double const v0 = interpolate(slices[k0][state], g, x);
    if (w == 0.0 || k0 + 1 >= slices.size()) return v0;
    return (1.0 - w) * v0 + w * interpolate(slices[k0 + 1][state], g, x);
  }
};

namespace detail {

// Completes one slice in place: exits at the arrival, then the switch branch
// applied to the slice itself. Supersets are final before their subsets, so
// one pass in decreasing mask order reaches the local fixed point.
inline void close_slice(SchemeContext const& ctx, std::vector<ScalarGrid>& slice, std::size_t full_index,
                        bool partial_finish, std::size_t r0, std::size_t r1) {
  auto const& g = ctx.map->geometry;
  std::size_t const n = slice.size();
  NodeScratch s(n, ctx.map->checkpoint_count());
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = 0; c < g.cols; ++c) {
      Node const node{static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c)};
      std::size_t const at = g.linear(node);
      bool const arrival = ctx.map->is_arrival(node);
      for (std::size_t i = 0; i < n; ++i) {
        double v = slice[i][at];
        if (arrival && i == full_index) v = 0.0;
        if (arrival && partial_finish) v = std::min(v, 0.0);
        s.through[i] = v;
      }
      ctx.claim_costs(node, s.claim);
      switch_branch(*ctx.space, s.claim, s.through, s.switched, s.best);
      for (std::size_t i = 0; i < n; ++i) slice[i][at] = std::min(s.through[i], s.switched[i]);
    }
  }
}

}  // namespace detail

/// Backward time marching for the score race.
///
/// Each step applies the semi-Lagrangian operator with step dt to the later
/// slice, then lets the player finish at the arrival and switch within the
/// slice. Being away from the arrival at T costs late_cost times the minimal
/// time still needed to get there.
inline TimeValueField solve_time(RaceMap const& map, StateSpace const& space, SolverConfig const& config) {
  SolverConfig const cfg = config.resolved(map.dx());
  cfg.validate_time(map.dx());
  if (space.mode() != RaceMode::FreeOrder) throw ConfigError("score races need a free-order state space");
  if (space.checkpoint_count() != map.checkpoint_count()) {
    throw ConfigError("state space and map disagree on the checkpoint count");
  }
  auto const& g = map.geometry;
  int const threads = resolve_threads(cfg.threads);

  // Minimal time to the arrival with the same step and controls as the march.
  RaceMap bare = map;
  bare.checkpoints.clear();
  bare.checkpoint_nodes.clear();
  StateSpace const single(0, RaceMode::FreeOrder);
  SolverConfig arrival_cfg = cfg;
  arrival_cfg.h = cfg.dt;
  ValueField const to_arrival = detail::iterate_stationary(bare, single, arrival_cfg, {});

  TimeValueField out;
  out.horizon = cfg.horizon;
  out.dt = cfg.dt;
  out.reward = cfg.reward;
  out.late_cost = cfg.late_cost;
  out.partial_finish = cfg.partial_finish;
  out.arrival_time = to_arrival.values[0];
  out.arrival_converged = to_arrival.converged;

  SchemeContext const ctx(map, space, cfg, cfg.dt, true);
  std::size_t const full_index = space.index_of(space.full());
  double const stranded = cfg.late_cost * scheme_upper_bound(cfg.dt, cfg.lambda, ctx.cost.max());

  std::vector<ScalarGrid> terminal(space.size(), ScalarGrid(g.rows, g.cols));
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t at = 0; at < g.size(); ++at) {
      bool const can_finish = cfg.partial_finish || i == full_index;
      terminal[i][at] = can_finish ? cfg.late_cost * out.arrival_time[at] : stranded;
    }
  }
  detail::close_slice(ctx, terminal, full_index, cfg.partial_finish, 0, g.rows);
  out.slices.push_back(std::move(terminal));

  auto const steps = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  for (std::size_t k = 1; k <= steps; ++k) {
    std::vector<ScalarGrid> const& later = out.slices.back();
    std::vector<ScalarGrid> slice(space.size(), ScalarGrid(g.rows, g.cols));
    parallel_blocks(g.rows, threads, [&](std::size_t r0, std::size_t r1, std::size_t) {
      for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t r = r0; r < r1; ++r) {
          for (std::size_t c = 0; c < g.cols; ++c) {
            Node const node{static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c)};
            slice[i][g.linear(node)] = ctx.sigma(later[i], node).value;
          }
        }
      }
      detail::close_slice(ctx, slice, full_index, cfg.partial_finish, r0, r1);
    });
    out.slices.push_back(std::move(slice));
  }
  return out;
}

}  // namespace orienteer

#endif  // ORIENTEER_TIME_DEPENDENT_HPP
