#ifndef ORIENTEER_STATIONARY_HPP
#define ORIENTEER_STATIONARY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "config.hpp"
#include "parallel.hpp"
#include "race_map.hpp"
#include "scheme.hpp"
#include "states.hpp"

namespace orienteer {

/// Called after every sweep with the previous and the new iterate.
using SweepObserver =
    std::function<void(int iteration, std::span<ScalarGrid const> previous, std::span<ScalarGrid const> next)>;

namespace detail {

// Scratch space for one node update across all states.
struct NodeScratch {
  std::vector<double> sigma, through, switched, claim;
  std::vector<std::size_t> best;

  NodeScratch(std::size_t states, std::size_t checkpoints)
      : sigma(states), through(states), switched(states), claim(checkpoints), best(states) {}
};

// One fixed-point update of every state at `node`, reading `src` and writing
// `dst` (which may alias `src`). Returns the largest change.
inline double update_node(SchemeContext const& ctx, std::span<ScalarGrid const> src, std::span<ScalarGrid> dst,
                          Node node, std::size_t full_index, NodeScratch& s) {
  auto const& g = ctx.map->geometry;
  std::size_t const at = g.linear(node);
  std::size_t const n = src.size();
  bool const arrival = ctx.map->is_arrival(node);
  for (std::size_t i = 0; i < n; ++i) {
    s.through[i] = src[i][at];
    s.sigma[i] = (arrival && i == full_index) ? 0.0 : ctx.sigma(src[i], node).value;
  }
  ctx.claim_costs(node, s.claim);
  switch_branch(*ctx.space, s.claim, s.through, s.switched, s.best);
  double change = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::min(s.sigma[i], s.switched[i]);
    if (arrival && i == full_index) v = 0.0;
    change = std::max(change, std::abs(v - s.through[i]));
    dst[i][at] = v;
  }
  return change;
}

// Fixed-point loop on an already resolved and validated configuration.
inline ValueField iterate_stationary(RaceMap const& map, StateSpace const& space, SolverConfig const& cfg,
                                     SweepObserver const& observer) {
  SchemeContext const ctx(map, space, cfg, cfg.h, false);
  double const upper = scheme_upper_bound(cfg.h, cfg.lambda, ctx.cost.max());
  auto const& g = map.geometry;
  std::size_t const full_index = space.index_of(space.full());

  std::vector<ScalarGrid> current(space.size(), ScalarGrid(g.rows, g.cols, upper));
  for (Node a : map.arrival_cells) current[full_index][g.linear(a)] = 0.0;
  std::vector<ScalarGrid> next = current;

  int const threads = resolve_threads(cfg.threads);
  ValueField result;
  result.upper_bound = upper;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    double residual = 0.0;
    if (cfg.sweep == Sweep::Jacobi) {
      std::vector<double> block_residual(static_cast<std::size_t>(std::max(1, threads)), 0.0);
      parallel_blocks(g.rows, threads, [&](std::size_t r0, std::size_t r1, std::size_t w) {
        detail::NodeScratch scratch(space.size(), map.checkpoint_count());
        double local = 0.0;
        for (std::size_t r = r0; r < r1; ++r) {
          for (std::size_t c = 0; c < g.cols; ++c) {
            Node const node{static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c)};
            local = std::max(local, detail::update_node(ctx, current, next, node, full_index, scratch));
          }
        }
        block_residual[w] = local;
      });
      residual = *std::max_element(block_residual.begin(), block_residual.end());
    } else {
      next = current;
      detail::NodeScratch scratch(space.size(), map.checkpoint_count());
      for (std::size_t i = 0; i < g.size(); ++i) {
        residual = std::max(residual, detail::update_node(ctx, next, next, g.node_at(i), full_index, scratch));
      }
    }
    if (observer) observer(iter, current, next);
    std::swap(current, next);
    result.iterations = iter;
    result.residual = residual;
    if (residual < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.values = std::move(current);
  return result;
}

}  // namespace detail

/// Solves the stationary switching QVI by fixed-point iteration
/// V <- min(N V, Sigma(V)) starting from a constant supersolution, so the
/// iterates decrease monotonically. Returns the last iterate even when the
/// tolerance is not met (converged == false).
inline ValueField solve_stationary(RaceMap const& map, StateSpace const& space, SolverConfig const& config,
                                   SweepObserver const& observer = {}) {
  SolverConfig const cfg = config.resolved(map.dx());
  cfg.validate(map.dx());
  if (space.checkpoint_count() != map.checkpoint_count()) {
    throw ConfigError("state space and map disagree on the checkpoint count");
  }
  return detail::iterate_stationary(map, space, cfg, observer);
}

/// Converts a discounted minimal-time cost into elapsed time at unit speed.
inline double implied_time(double value, double lambda) {
  return -std::log1p(-lambda * value) / lambda;
}

}  // namespace orienteer

#endif  // ORIENTEER_STATIONARY_HPP
