#ifndef ORIENTEER_CONFIG_HPP
#define ORIENTEER_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "states.hpp"

namespace orienteer {

enum class Sweep { Jacobi, GaussSeidel };

/// Numerical knobs shared by the stationary and the time-dependent solvers.
struct SolverConfig {
  double lambda = 1e-5;         ///< discount factor
  double h = 0.0;               ///< pseudo-time step; 0 means "use dx"
  double dt = 0.0;              ///< time step of the score solver; 0 means "use 5*dx"
  double eps_run = 1e-3;        ///< obstacle penalization of the running cost
  double eps_switch = 1e-3;     ///< distance penalization of the switching cost
  int n_controls = 32;          ///< equispaced unit directions
  bool include_zero_control = false;
  bool lattice_controls = true; ///< also land exactly on nodes within one step
  double tol = 1e-3;            ///< sup-norm fixed-point tolerance
  int max_iters = 100000;
  Sweep sweep = Sweep::Jacobi;
  int threads = 1;              ///< 0 means hardware concurrency

  // Score races.
  double horizon = 0.0;         ///< race deadline T
  double reward = -1.0;         ///< per-checkpoint reward; negative means 2*T
  double late_cost = 0.0;       ///< price per unit of lateness at T; 0 means reward/(2*dx)
  bool partial_finish = true;   ///< arrival ends a score race in any state

  /// Fills the dx-dependent defaults.
  SolverConfig resolved(double dx) const {
    SolverConfig c = *this;
    if (c.h <= 0.0) c.h = dx;
    if (c.dt <= 0.0) c.dt = 5.0 * dx;
    if (c.reward < 0.0) c.reward = 2.0 * c.horizon;
    if (c.late_cost <= 0.0) c.late_cost = std::max(1.0, c.reward / (2.0 * dx));
    return c;
  }

  SwitchCost switch_cost(bool score) const {
    return {eps_switch, score ? reward : 0.0};
  }

  /// Throws ConfigError when a knob is out of range for grid spacing dx.
  void validate(double dx) const {
    auto fail = [](std::string const& what) { throw ConfigError(what); };
    if (!(lambda > 0.0)) fail("lambda must be positive");
    if (!(eps_run > 0.0) || !(eps_switch > 0.0)) fail("eps must be positive");
    if (!(h >= 0.5 * dx * (1 - 1e-12) && h <= 5.0 * dx * (1 + 1e-12))) {
      fail("h must lie in [0.5*dx, 5*dx], got h=" + std::to_string(h));
    }
    if (n_controls < 8) fail("n_controls must be at least 8");
    if (!(tol > 0.0)) fail("tol must be positive");
    if (max_iters < 1) fail("max_iters must be at least 1");
    if (threads < 0) fail("threads must be nonnegative");
  }

  void validate_time(double dx) const {
    validate(dx);
    if (!(horizon > 0.0)) fail_time("horizon must be positive");
    if (!(dt > 0.0)) fail_time("dt must be positive");
    if (!(reward >= 0.0)) fail_time("reward must be nonnegative");
    if (!(late_cost >= 1.0)) fail_time("late_cost must be at least 1");
  }

 private:
  [[noreturn]] static void fail_time(std::string const& what) { throw ConfigError(what); }
};

}  // namespace orienteer

#endif  // ORIENTEER_CONFIG_HPP
