#ifndef ORIENTEER_SCHEME_HPP
#define ORIENTEER_SCHEME_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "config.hpp"
#include "cost.hpp"
#include "grid.hpp"
#include "interpolate.hpp"
#include "race_map.hpp"
#include "states.hpp"

namespace orienteer {

inline constexpr double no_switch = std::numeric_limits<double>::infinity();

/// Approximate value function: one nodal grid per discrete state, indexed by
/// the canonical state index.
struct ValueField {
  std::vector<ScalarGrid> values;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  double upper_bound = 0.0;  ///< constant the iteration started from

  ScalarGrid const& operator[](std::size_t state_index) const { return values[state_index]; }
  ScalarGrid& operator[](std::size_t state_index) { return values[state_index]; }
};

/// Sampled control set: unit directions plus, optionally, exact landings on
/// nodes within one step (which includes staying put when the zero control is
/// enabled).
class ControlSet {
 public:
  ControlSet(int n_directions, bool zero, bool lattice, double step, double dx)
      : step_(step), zero_(zero), lattice_(lattice) {
    for (int k = 0; k < n_directions; ++k) {
      double const a = 2.0 * std::numbers::pi * k / n_directions;
      directions_.push_back({std::cos(a), std::sin(a)});
    }
    auto const reach = static_cast<std::ptrdiff_t>(std::floor(step / dx + 1e-9));
    if (lattice) {
      for (std::ptrdiff_t dr = -reach; dr <= reach; ++dr) {
        for (std::ptrdiff_t dc = -reach; dc <= reach; ++dc) {
          if (dr == 0 && dc == 0) continue;
          double const len = std::hypot(static_cast<double>(dr), static_cast<double>(dc)) * dx;
          if (len <= step * (1 + 1e-12)) offsets_.push_back({dr, dc});
        }
      }
    }
    if (zero) offsets_.insert(offsets_.begin(), Node{0, 0});
  }

  double step() const { return step_; }
  bool has_zero() const { return zero_; }
  bool has_lattice() const { return lattice_; }
  std::vector<Point> const& directions() const { return directions_; }
  std::vector<Node> const& offsets() const { return offsets_; }
  std::size_t size() const { return directions_.size() + offsets_.size(); }

  /// Displacement of control k over one step.
  Point displacement(std::size_t k, double dx) const {
    if (k < directions_.size()) return {step_ * directions_[k].x, step_ * directions_[k].y};
    Node const o = offsets_[k - directions_.size()];
    return {static_cast<double>(o.col) * dx, static_cast<double>(o.row) * dx};
  }

 private:
  double step_;
  bool zero_;
  bool lattice_;
  std::vector<Point> directions_;
  std::vector<Node> offsets_;
};

/// Smallest constant V with step*max_cost + exp(-lambda*step)*V <= V in
/// floating point: a supersolution of the scheme, hence a valid starting point
/// for monotone decreasing iteration.
inline double scheme_upper_bound(double step, double lambda, double max_cost) {
  double const decay = std::exp(-lambda * step);
  double v = step * max_cost / -std::expm1(-lambda * step);
  v *= 1.0 + 1e-12;
  while (step * max_cost + decay * v > v) v = std::nextafter(v, std::numeric_limits<double>::infinity());
  return v;
}

struct ControlChoice {
  double value = std::numeric_limits<double>::infinity();
  int control = -1;
};

/// Min over the control set of the interpolated field at the feet of node.
inline ControlChoice best_foot(ScalarGrid const& field, GridGeometry const& g, ControlSet const& controls,
                               Node node) {
  Point const x = g.position(node);
  ControlChoice best;
  auto const& dirs = controls.directions();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    Point const foot{x.x + controls.step() * dirs[k].x, x.y + controls.step() * dirs[k].y};
    double const v = interpolate(field, g, foot);
    if (v < best.value) best = {v, static_cast<int>(k)};
  }
  auto const& offs = controls.offsets();
  for (std::size_t k = 0; k < offs.size(); ++k) {
    Node const n{node.row + offs[k].row, node.col + offs[k].col};
    if (!g.contains(n)) continue;
    double const v = field[g.linear(n)];
    if (v < best.value) best = {v, static_cast<int>(dirs.size() + k)};
  }
  return best;
}

/// Best control from an arbitrary point p for an evaluator of the later value.
/// Candidates: every unit direction (foot clamped into the domain), staying
/// put when enabled, and every node within one step when lattice controls are
/// on. Ties go to the first candidate in that order.
template <class Eval>
ControlChoice best_move(Eval&& eval, GridGeometry const& g, ControlSet const& controls, Point p,
                        Point* landing = nullptr) {
  ControlChoice best;
  Point best_point = p;
  auto consider = [&](Point foot, int index) {
    double const v = eval(foot);
    if (v < best.value) {
      best = {v, index};
      best_point = foot;
    }
  };
  auto const& dirs = controls.directions();
  double const step = controls.step();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    consider(g.clamp({p.x + step * dirs[k].x, p.y + step * dirs[k].y}), static_cast<int>(k));
  }
  int const lattice_index = static_cast<int>(dirs.size()) + (controls.has_zero() ? 1 : 0);
  if (controls.has_zero()) consider(p, static_cast<int>(dirs.size()));
  if (controls.has_lattice()) {
    auto const r0 = static_cast<std::ptrdiff_t>(std::floor((p.y - step - g.origin.y) / g.dx));
    auto const r1 = static_cast<std::ptrdiff_t>(std::ceil((p.y + step - g.origin.y) / g.dx));
    auto const c0 = static_cast<std::ptrdiff_t>(std::floor((p.x - step - g.origin.x) / g.dx));
    auto const c1 = static_cast<std::ptrdiff_t>(std::ceil((p.x + step - g.origin.x) / g.dx));
    for (std::ptrdiff_t r = r0; r <= r1; ++r) {
      for (std::ptrdiff_t c = c0; c <= c1; ++c) {
        Node const n{r, c};
        if (!g.contains(n)) continue;
        Point const q = g.position(n);
        double const d = distance(p, q);
        if (d > step * (1 + 1e-12) || d == 0.0) continue;
        consider(q, lattice_index);
      }
    }
  }
  if (landing) *landing = best_point;
  return best;
}

inline ControlChoice best_foot_at(ScalarGrid const& field, GridGeometry const& g,
                                  ControlSet const& controls, Point p, Point* landing = nullptr) {
  return best_move([&](Point y) { return interpolate(field, g, y); }, g, controls, p, landing);
}

/// Everything the per-node kernels need, prepared once per solve.
struct SchemeContext {
  RaceMap const* map;
  StateSpace const* space;
  CostField cost;
  ControlSet controls;
  double decay;
  SwitchCost switching;

  SchemeContext(RaceMap const& map_, StateSpace const& space_, SolverConfig const& cfg, double step,
                bool score)
      : map(&map_),
        space(&space_),
        cost(map_, cfg.eps_run),
        controls(cfg.n_controls, cfg.include_zero_control, cfg.lattice_controls, step, map_.dx()),
        decay(std::exp(-cfg.lambda * step)),
        switching(cfg.switch_cost(score)) {}

  double step() const { return controls.step(); }

  /// Continuous branch at a node for one state grid.
  ControlChoice sigma(ScalarGrid const& field, Node node) const {
    ControlChoice c = best_foot(field, map->geometry, controls, node);
    c.value = step() * cost.values[map->geometry.linear(node)] + decay * c.value;
    return c;
  }

  /// Per-checkpoint claim costs at a node.
  void claim_costs(Node node, std::span<double> out) const {
    Point const x = map->geometry.position(node);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = claim_cost(switching, x, map->checkpoints[j]);
  }
};

/// Switch branch for every state at one node.
///
/// through[i] is the value a switch into state i lands on. For free order the
/// min over all strict supersets is obtained by chaining single-bit claims
/// (claim costs are additive), in decreasing mask order. Cross-country only
/// allows the next prefix state. best[i] receives the argmin target state index
/// (ties to the smallest canonical index), or size() when no switch exists.
inline void switch_branch(StateSpace const& space, std::span<double const> claim,
                          std::span<double const> through, std::span<double> value,
                          std::span<std::size_t> best) {
  std::size_t const n = space.size();
  if (space.mode() == RaceMode::CrossCountry) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k + 1 < n) {
        value[k] = claim[k] + through[k + 1];
        best[k] = k + 1;
      } else {
        value[k] = no_switch;
        best[k] = n;
      }
    }
    return;
  }
  std::uint32_t const full = space.full().bits;
  for (std::size_t i = n; i-- > 0;) {
    auto const q = static_cast<std::uint32_t>(i);
    double v = no_switch;
    std::size_t arg = n;
    std::uint32_t missing = full & ~q;
    while (missing) {
      auto const j = static_cast<std::size_t>(std::countr_zero(missing));
      missing &= missing - 1;
      std::size_t const next = q | (1u << j);
      double cand = through[next];
      std::size_t target = next;
      if (value[next] < cand || (value[next] == cand && best[next] < target)) {
        cand = value[next];
        target = best[next];
      }
      cand += claim[j];
      if (cand < v || (cand == v && target < arg)) {
        v = cand;
        arg = target;
      }
    }
    value[i] = v;
    best[i] = arg;
  }
}

/// Semi-Lagrangian update at one node:
/// step*l(x) + exp(-lambda*step) * min_u I[V(.,q)](x + step*u); zero at the
/// arrival in the terminal state.
inline ControlChoice sl_update(ValueField const& field, RaceMap const& map, StateSpace const& space,
                               Node node, StateMask q, SolverConfig const& cfg) {
  if (q == space.full() && map.is_arrival(node)) return {0.0, -1};
  SolverConfig const c = cfg.resolved(map.dx());
  SchemeContext const ctx(map, space, c, c.h, false);
  return ctx.sigma(field[space.index_of(q)], node);
}

struct SwitchChoice {
  double value = no_switch;
  StateMask target{};
};

/// Discrete switch operator at one node by direct enumeration of the permitted
/// switches; +infinity when none is permitted.
inline SwitchChoice switch_operator(ValueField const& field, RaceMap const& map,
                                    StateSpace const& space, Node node, StateMask q,
                                    SwitchCost const& cost) {
  SwitchChoice best;
  Point const x = map.geometry.position(node);
  for (StateMask next : permitted_switches(space, q)) {
    double const v = field[space.index_of(next)][map.geometry.linear(node)] +
                     switching_cost(cost, space, map, x, q, next);
    if (v < best.value) best = {v, next};
  }
  return best;
}

}  // namespace orienteer

#endif  // ORIENTEER_SCHEME_HPP
