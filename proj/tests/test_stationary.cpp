#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace orienteer;

namespace {

double free_space_value(double d, double lambda) { return -std::expm1(-lambda * d) / lambda; }

ValueField constant_field(StateSpace const& s, RaceMap const& map, double c) {
  ValueField f;
  f.values.assign(s.size(), ScalarGrid(map.rows(), map.cols(), c));
  return f;
}

}  // namespace

TEST(SlUpdate, ConstantFieldIdentity) {
  RaceMap const map = parse_map("3 3 0.1\n...\n.#.\n..A");
  StateSpace const s(0, RaceMode::FreeOrder);
  SolverConfig cfg;
  ValueField const f = constant_field(s, map, 4.0);
  double const h = 0.1;
  double const decay = std::exp(-cfg.lambda * h);
  EXPECT_DOUBLE_EQ(sl_update(f, map, s, {0, 0}, s.empty(), cfg).value, h + decay * 4.0);
  EXPECT_DOUBLE_EQ(sl_update(f, map, s, {1, 1}, s.empty(), cfg).value, 1000.0 * h + decay * 4.0);
  EXPECT_EQ(sl_update(f, map, s, {2, 2}, s.full(), cfg).value, 0.0);
}

TEST(SwitchOperator, Examples) {
  RaceMap const map = parse_map("1 4 0.1\n1.2A");
  StateSpace const s(2, RaceMode::FreeOrder);
  SwitchCost const cost{1e-3, 0.0};
  ValueField f = constant_field(s, map, 0.0);

  EXPECT_EQ(switch_operator(f, map, s, {0, 0}, s.full(), cost).value, no_switch);

  // At checkpoint 1 the single flip is free.
  f[s.index_of(s.parse("10"))].fill(3.0);
  f[s.index_of(s.parse("11"))].fill(500.0);
  auto const at_cp = switch_operator(f, map, s, {0, 0}, s.empty(), cost);
  EXPECT_EQ(at_cp.value, 3.0);
  EXPECT_EQ(s.format(at_cp.target), "10");

  // Two candidates, 5 and 7 after costs: the smaller wins.
  f[s.index_of(s.parse("10"))].fill(5.0 - 100.0);
  f[s.index_of(s.parse("11"))].fill(7.0 - 100.0 - 100.0);
  auto const two = switch_operator(f, map, s, {0, 1}, s.empty(), cost);
  EXPECT_NEAR(two.value, 5.0, 1e-12);
  EXPECT_EQ(s.format(two.target), "10");
}

TEST(SwitchOperator, TiesGoToTheSmallestIndex) {
  RaceMap const map = parse_map("1 3 1\n1A2");
  StateSpace const s(2, RaceMode::FreeOrder);
  ValueField f = constant_field(s, map, 1.0);
  auto const c = switch_operator(f, map, s, {0, 1}, s.empty(), SwitchCost{1.0, 0.0});
  EXPECT_EQ(c.value, 2.0);
  EXPECT_EQ(c.target.bits, 1u);
}

TEST(SchemeUpperBound, IsAFloatingPointSupersolution) {
  for (double step : {0.05, 0.1, 0.5, 1.0}) {
    for (double lambda : {1e-5, 1e-2, 0.3}) {
      double const v = scheme_upper_bound(step, lambda, 1000.0);
      EXPECT_LE(step * 1000.0 + std::exp(-lambda * step) * v, v);
      EXPECT_LE(v, 1.0 / lambda * 1000.0 * (1 + 1e-3) + step * 1000.0);
    }
  }
}

TEST(SolveStationary, FreeSpaceMatchesClosedForm) {
  RaceMap const map = fixtures::open_map(21, 1.0, {10, 10});
  StateSpace const s(0, RaceMode::FreeOrder);
  SolverConfig const cfg;
  ValueField const f = solve_stationary(map, s, cfg);
  ASSERT_TRUE(f.converged);
  Point const a = map.geometry.position({10, 10});
  for (std::size_t i = 0; i < map.geometry.size(); ++i) {
    Point const x = map.geometry.position(map.geometry.node_at(i));
    double const exact = free_space_value(distance(x, a), cfg.lambda);
    EXPECT_NEAR(f[0][i], exact, 2.0) << "node " << i;
    EXPECT_GE(f[0][i], 0.0);
  }
  EXPECT_EQ(f[0][map.geometry.linear({10, 10})], 0.0);
}

TEST(SolveStationary, RefinementReducesTheError) {
  double errors[2];
  int k = 0;
  for (std::size_t n : {21u, 41u}) {
    double const dx = 2.0 / static_cast<double>(n - 1);
    auto const last = static_cast<std::ptrdiff_t>(n - 1);
    RaceMap const map = fixtures::open_map(n, dx, {last / 2, last});
    StateSpace const s(0, RaceMode::FreeOrder);
    ValueField const f = solve_stationary(map, s, SolverConfig{});
    Point const start{0.0, 1.0};
    double const exact = free_space_value(2.0, 1e-5);
    errors[k++] = std::abs(interpolate(f[0], map.geometry, start) - exact);
    EXPECT_LE(errors[k - 1], 2.0 * dx);
  }
  EXPECT_LE(errors[1], errors[0] + 1e-9);
}

TEST(SolveStationary, ArrivalPinnedFromTheFirstIteration) {
  RaceMap const& map = fixtures::desk_map();
  StateSpace const s(3, RaceMode::FreeOrder);
  SolverConfig cfg;
  cfg.max_iters = 5;
  std::size_t const full = s.index_of(s.full());
  std::size_t const a = map.geometry.linear(map.arrival_cells[0]);
  int seen = 0;
  ValueField const f = solve_stationary(map, s, cfg, [&](int, auto, auto next) {
    EXPECT_EQ(next[full][a], 0.0);
    ++seen;
  });
  EXPECT_EQ(seen, 5);
  EXPECT_FALSE(f.converged);
  EXPECT_EQ(f.iterations, 5);
  EXPECT_GT(f.residual, cfg.tol);
}

TEST(SolveStationary, IteratesNeverIncrease) {
  RaceMap const& map = fixtures::desk_map();
  StateSpace const s(3, RaceMode::CrossCountry);
  SolverConfig cfg;
  cfg.max_iters = 60;
  std::size_t violations = 0;
  solve_stationary(map, s, cfg, [&](int, auto prev, auto next) {
    for (std::size_t q = 0; q < prev.size(); ++q) {
      for (std::size_t i = 0; i < prev[q].size(); ++i) violations += next[q][i] > prev[q][i];
    }
  });
  EXPECT_EQ(violations, 0u);
}

TEST(SolveStationary, QviBranchesAtConvergence) {
  RaceMap const& map = fixtures::desk_map();
  StateSpace const s(3, RaceMode::FreeOrder);
  SolverConfig const cfg = SolverConfig{}.resolved(map.dx());
  ValueField const& f = fixtures::desk_solution(RaceMode::FreeOrder);
  ASSERT_TRUE(f.converged);
  SwitchCost const cost = cfg.switch_cost(false);
  for (std::size_t i = 0; i < map.geometry.size(); ++i) {
    Node const n = map.geometry.node_at(i);
    for (StateMask q : s.states()) {
      double const v = f[s.index_of(q)][i];
      double const sigma = sl_update(f, map, s, n, q, cfg).value;
      double const sw = switch_operator(f, map, s, n, q, cost).value;
      EXPECT_LE(v, sigma + cfg.tol);
      EXPECT_LE(v, sw + cfg.tol);
      EXPECT_LE(std::min(std::abs(v - sigma), std::abs(v - sw)), cfg.tol);
      EXPECT_GE(v, 0.0);
    }
  }
}

TEST(SolveStationary, FreeOrderDominatesCrossCountry) {
  RaceMap const& map = fixtures::desk_map();
  SolverConfig cfg;
  cfg.tol = 1e-300;
  cfg.max_iters = 150;
  StateSpace const free(3, RaceMode::FreeOrder), cross(3, RaceMode::CrossCountry);
  ValueField const vf = solve_stationary(map, free, cfg);
  ValueField const vc = solve_stationary(map, cross, cfg);
  for (StateMask q : cross.states()) {
    auto const& a = vf[free.index_of(q)];
    auto const& b = vc[cross.index_of(q)];
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_LE(a[i], b[i]) << "state " << cross.format(q);
  }
}

TEST(SolveStationary, LargerDiscountLowersValues) {
  RaceMap const map = parse_map("9 9 0.25\n.........\n....#....\n..1.#....\n....#....\n....#..A.\n"
                                "....#....\n.........\n.........\n.........");
  StateSpace const s(1, RaceMode::FreeOrder);
  SolverConfig lo, hi;
  lo.lambda = 1e-5;
  hi.lambda = 1e-2;
  ValueField const a = solve_stationary(map, s, lo);
  ValueField const b = solve_stationary(map, s, hi);
  for (std::size_t q = 0; q < s.size(); ++q) {
    for (std::size_t i = 0; i < a[q].size(); ++i) EXPECT_GE(a[q][i] + lo.tol, b[q][i]);
  }
}

TEST(SolveStationary, ParallelSweepsAreBitwiseIdentical) {
  RaceMap const& map = fixtures::desk_map();
  StateSpace const s(3, RaceMode::FreeOrder);
  SolverConfig one, many;
  one.max_iters = many.max_iters = 40;
  many.threads = 4;
  ValueField const a = solve_stationary(map, s, one);
  ValueField const b = solve_stationary(map, s, many);
  for (std::size_t q = 0; q < s.size(); ++q) EXPECT_TRUE(a[q] == b[q]);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(SolveStationary, GaussSeidelReachesTheSameSolution) {
  RaceMap const& map = fixtures::desk_map();
  StateSpace const s(3, RaceMode::FreeOrder);
  SolverConfig cfg;
  cfg.sweep = Sweep::GaussSeidel;
  ValueField const gs = solve_stationary(map, s, cfg);
  ValueField const& jac = fixtures::desk_solution(RaceMode::FreeOrder);
  ASSERT_TRUE(gs.converged);
  EXPECT_LE(gs.iterations, jac.iterations);
  double const a = interpolate(gs[0], map.geometry, fixtures::desk_start);
  double const b = interpolate(jac[0], map.geometry, fixtures::desk_start);
  EXPECT_NEAR(a, b, 0.05 * b);
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  cfg.h = 0.01;
  EXPECT_THROW(cfg.validate(0.1), ConfigError);
  cfg.h = 0.6;
  EXPECT_THROW(cfg.validate(0.1), ConfigError);
  cfg.h = 0.1;
  cfg.n_controls = 6;
  EXPECT_THROW(cfg.validate(0.1), ConfigError);
  cfg.n_controls = 8;
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(0.1), ConfigError);
  RaceMap const map = parse_map("2 2 1\n1A\n..");
  EXPECT_THROW(solve_stationary(map, StateSpace(2, RaceMode::FreeOrder), SolverConfig{}), ConfigError);
}

TEST(ImpliedTime, InvertsTheDiscount) {
  double const lambda = 1e-5;
  for (double t : {0.0, 1.0, 7.5, 100.0}) EXPECT_NEAR(implied_time(free_space_value(t, lambda), lambda), t, 1e-9);
}
