#ifndef ORIENTEER_ORACLE_HPP
#define ORIENTEER_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "cost.hpp"
#include "race_map.hpp"
#include "states.hpp"

namespace orienteer {

/// Neighbourhood of the graph search. Sixteen adds the knight moves, which
/// cuts the worst-case metric error from about 8% to about 2.8%.
enum class Stencil { Eight, Sixteen };

inline constexpr double unreachable = std::numeric_limits<double>::infinity();

namespace detail {

inline std::vector<Node> stencil_offsets(Stencil s) {
  std::vector<Node> out{{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
  if (s == Stencil::Sixteen) {
    for (std::ptrdiff_t a : {-2, 2}) {
      for (std::ptrdiff_t b : {-1, 1}) {
        out.push_back({a, b});
        out.push_back({b, a});
      }
    }
  }
  return out;
}

}  // namespace detail

/// Single-source Dijkstra on the node graph. Edge weight is the Euclidean step
/// length times the mean running cost of its two endpoints. With free_only set
/// obstacle nodes are removed from the graph instead of penalized.
inline ScalarGrid distance_field(RaceMap const& map, double eps_run, Node src, Stencil stencil = Stencil::Eight,
                                 bool free_only = false) {
  auto const& g = map.geometry;
  if (!g.contains(src)) throw DomainError("source node lies outside the grid");
  CostField const cost(map, eps_run);
  ScalarGrid dist(g.rows, g.cols, unreachable);
  if (free_only && map.is_obstacle(src)) return dist;

  auto const offsets = detail::stencil_offsets(stencil);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[g.linear(src)] = 0.0;
  open.push({0.0, g.linear(src)});
  while (!open.empty()) {
    auto const [d, at] = open.top();
    open.pop();
    if (d > dist[at]) continue;
    Node const u = g.node_at(at);
    for (Node o : offsets) {
      Node const v{u.row + o.row, u.col + o.col};
      if (!g.contains(v)) continue;
      if (free_only && map.is_obstacle(v)) continue;
      std::size_t const to = g.linear(v);
      double const len = std::hypot(static_cast<double>(o.row), static_cast<double>(o.col)) * g.dx;
      double const nd = d + len * 0.5 * (cost.values[at] + cost.values[to]);
      if (nd < dist[to]) {
        dist[to] = nd;
        open.push({nd, to});
      }
    }
  }
  return dist;
}

/// Travel time between two nodes: penalized (obstacles crossable at cost
/// 1/eps) and restricted to free nodes (infinite when disconnected).
struct ShortestTime {
  double time = unreachable;
  double free_only = unreachable;
};

inline ShortestTime grid_shortest_time(RaceMap const& map, SolverConfig const& cfg, Node src, Node dst,
                                       Stencil stencil = Stencil::Eight) {
  if (!map.geometry.contains(src) || !map.geometry.contains(dst)) {
    throw DomainError("oracle query node lies outside the grid");
  }
  std::size_t const at = map.geometry.linear(dst);
  return {distance_field(map, cfg.eps_run, src, stencil)[at],
          distance_field(map, cfg.eps_run, src, stencil, true)[at]};
}

struct TourResult {
  std::vector<std::size_t> order;  ///< checkpoint numbers, 1-based
  std::vector<double> leg_times;   ///< start -> first, ..., last -> arrival
  double total_time = unreachable;
};

inline constexpr std::size_t oracle_max_checkpoints = 8;

/// Exhaustive tour: every visiting order for free-order races, the identity
/// order for cross-country. Legs are penalized grid shortest times; the last
/// leg goes to the nearest arrival node. Ties keep the lexicographically first
/// order.
inline TourResult brute_force_tour(RaceMap const& map, SolverConfig const& cfg, Point start, RaceMode mode,
                                   Stencil stencil = Stencil::Eight) {
  std::size_t const m = map.checkpoint_count();
  if (m > oracle_max_checkpoints) {
    throw ConfigError("brute-force tour refuses m = " + std::to_string(m) + " (limit " +
                      std::to_string(oracle_max_checkpoints) + ")");
  }
  auto const& g = map.geometry;
  // fields[0] from the start, fields[j] from checkpoint j.
  std::vector<ScalarGrid> fields;
  fields.push_back(distance_field(map, cfg.eps_run, g.nearest(g.clamp(start)), stencil));
  for (Node n : map.checkpoint_nodes) fields.push_back(distance_field(map, cfg.eps_run, n, stencil));

  auto leg_to_checkpoint = [&](std::size_t from, std::size_t j) {
    return fields[from][g.linear(map.checkpoint_nodes[j - 1])];
  };
  auto leg_to_arrival = [&](std::size_t from) {
    double best = unreachable;
    for (Node a : map.arrival_cells) best = std::min(best, fields[from][g.linear(a)]);
    return best;
  };

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{1});
  TourResult best;
  do {
    TourResult cand;
    cand.order = order;
    std::size_t from = 0;
    for (std::size_t j : order) {
      cand.leg_times.push_back(leg_to_checkpoint(from, j));
      from = j;
    }
    cand.leg_times.push_back(leg_to_arrival(from));
    cand.total_time = 0.0;
    for (double t : cand.leg_times) cand.total_time += t;
    if (best.leg_times.empty() || cand.total_time < best.total_time) best = cand;
  } while (mode == RaceMode::FreeOrder && std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace orienteer

#endif  // ORIENTEER_ORACLE_HPP
