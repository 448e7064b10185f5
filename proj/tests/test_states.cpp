#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace orienteer;

namespace {

StateMask mask(StateSpace const& s, char const* bits) { return s.parse(bits); }

}  // namespace

TEST(EnumerateStates, Counts) {
  EXPECT_EQ(enumerate_states(7, RaceMode::FreeOrder).size(), 128u);
  EXPECT_EQ(enumerate_states(7, RaceMode::CrossCountry).size(), 8u);
  for (RaceMode mode : {RaceMode::FreeOrder, RaceMode::CrossCountry}) {
    StateSpace const s = enumerate_states(0, mode);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.state(0), s.full());
    EXPECT_EQ(s.full(), s.empty());
  }
  EXPECT_THROW(enumerate_states(21, RaceMode::FreeOrder), ConfigError);
  EXPECT_NO_THROW(enumerate_states(20, RaceMode::CrossCountry));
}

TEST(EnumerateStates, CanonicalIndicesAndPrefixes) {
  StateSpace const cross(4, RaceMode::CrossCountry);
  for (std::size_t k = 0; k < cross.size(); ++k) {
    StateMask const q = cross.state(k);
    EXPECT_EQ(cross.index_of(q), k);
    EXPECT_EQ(static_cast<std::size_t>(q.popcount()), k);
    EXPECT_EQ(q.bits & (q.bits + 1), 0u);
  }
  EXPECT_EQ(cross.format(cross.state(2)), "1100");
  StateSpace const free(3, RaceMode::FreeOrder);
  EXPECT_EQ(free.index_of(mask(free, "101")), 5u);
  EXPECT_EQ(free.format(StateMask{6}), "011");
  EXPECT_THROW(cross.index_of(StateMask{2}), DomainError);
}

TEST(PermittedSwitches, Examples) {
  StateSpace const cross(3, RaceMode::CrossCountry);
  auto const next = permitted_switches(cross, mask(cross, "100"));
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(cross.format(next[0]), "110");

  StateSpace const free(3, RaceMode::FreeOrder);
  EXPECT_TRUE(permitted_switches(free, free.full()).empty());
  EXPECT_TRUE(permitted_switches(cross, cross.full()).empty());

  auto const sup = permitted_switches(free, mask(free, "100"));
  ASSERT_EQ(sup.size(), 3u);
  EXPECT_EQ(free.format(sup[0]), "110");
  EXPECT_EQ(free.format(sup[1]), "101");
  EXPECT_EQ(free.format(sup[2]), "111");
  EXPECT_THROW(permitted_switches(cross, StateMask{4}), DomainError);
}

TEST(PermittedSwitches, FormADagEndingAtFull) {
  for (RaceMode mode : {RaceMode::FreeOrder, RaceMode::CrossCountry}) {
    StateSpace const s(4, mode);
    for (StateMask q : s.states()) {
      auto const next = permitted_switches(s, q);
      if (q == s.full()) {
        EXPECT_TRUE(next.empty());
      } else {
        EXPECT_FALSE(next.empty());
      }
      for (StateMask n : next) {
        EXPECT_GT(n.popcount(), q.popcount());
        EXPECT_TRUE(q.subset_of(n));
      }
    }
  }
}

TEST(PermittedSwitches, CrossIsRestrictionOfFree) {
  StateSpace const cross(5, RaceMode::CrossCountry);
  StateSpace const free(5, RaceMode::FreeOrder);
  for (StateMask q : cross.states()) {
    auto const f = permitted_switches(free, q);
    for (StateMask n : permitted_switches(cross, q)) {
      EXPECT_NE(std::find(f.begin(), f.end(), n), f.end());
    }
  }
}

TEST(SwitchingCost, Examples) {
  RaceMap const map = parse_map("1 5 0.1\n1.2A3");
  StateSpace const s(3, RaceMode::FreeOrder);
  SwitchCost const cost{1e-3, 0.0};
  EXPECT_EQ(switching_cost(cost, s, map, map.checkpoints[2], mask(s, "110"), mask(s, "111")), 0.0);
  EXPECT_NEAR(switching_cost(cost, s, map, {0.2, 0.0}, mask(s, "000"), mask(s, "100")), 200.0, 1e-9);
  // Distances 0.1 (to checkpoint 2 at x=0.2) and 0.3 (to checkpoint 3 at x=0.4) from x=0.1.
  EXPECT_NEAR(switching_cost(cost, s, map, {0.1, 0.0}, mask(s, "100"), mask(s, "111")), 400.0, 1e-9);
  EXPECT_THROW(switching_cost(cost, s, map, {0.0, 0.0}, mask(s, "100"), mask(s, "010")), DomainError);
  EXPECT_THROW(switching_cost(cost, s, map, {0.0, 0.0}, mask(s, "100"), mask(s, "100")), DomainError);

  StateSpace const cross(3, RaceMode::CrossCountry);
  EXPECT_THROW(switching_cost(cost, cross, map, {0.0, 0.0}, mask(cross, "000"), mask(cross, "110")),
               DomainError);
}

TEST(SwitchingCost, RewardIsSubtractedPerCheckpoint) {
  RaceMap const map = parse_map("1 5 0.1\n1.2A3");
  StateSpace const s(3, RaceMode::FreeOrder);
  SwitchCost const cost{1e-3, 4.0};
  EXPECT_NEAR(switching_cost(cost, s, map, map.checkpoints[0], mask(s, "000"), mask(s, "101")),
              400.0 - 8.0, 1e-9);
}

TEST(SwitchingCost, ZeroOnlyAtTheClaimedCheckpoint) {
  RaceMap const map = parse_map("1 5 0.1\n1.2A3");
  StateSpace const s(3, RaceMode::FreeOrder);
  SwitchCost const cost{1e-3, 0.0};
  for (std::size_t c = 0; c < 5; ++c) {
    Point const x = map.geometry.position({0, static_cast<std::ptrdiff_t>(c)});
    for (StateMask q : s.states()) {
      for (StateMask n : permitted_switches(s, q)) {
        double const v = switching_cost(cost, s, map, x, q, n);
        auto const added = newly_visited(q, n);
        bool const at = added.size() == 1 && map.checkpoints[added[0]].x == x.x;
        EXPECT_EQ(v == 0.0, at);
        EXPECT_GE(v, 0.0);
      }
    }
  }
}

// The chained-claims dynamic program must agree with direct enumeration of
// all permitted supersets, values and tie-broken targets alike.
TEST(SwitchBranch, MatchesDirectEnumeration) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 3);
  for (std::size_t m : {1u, 2u, 4u, 6u}) {
    for (RaceMode mode : {RaceMode::FreeOrder, RaceMode::CrossCountry}) {
      StateSpace const s(m, mode);
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> claim(m), through(s.size()), value(s.size());
        std::vector<std::size_t> best(s.size());
        // Small integers provoke ties.
        for (auto& c : claim) c = trial % 2 ? val(rng) : small(rng);
        for (auto& t : through) t = trial % 2 ? val(rng) : small(rng);
        switch_branch(s, claim, through, value, best);
        for (std::size_t i = 0; i < s.size(); ++i) {
          StateMask const q = s.state(i);
          double expect = no_switch;
          std::size_t arg = s.size();
          for (StateMask n : permitted_switches(s, q)) {
            double v = through[s.index_of(n)];
            for (std::size_t j : newly_visited(q, n)) v += claim[j];
            if (v < expect) {
              expect = v;
              arg = s.index_of(n);
            }
          }
          if (expect == no_switch) {
            EXPECT_EQ(value[i], no_switch);
          } else {
            EXPECT_NEAR(value[i], expect, 1e-12) << "m=" << m << " state " << s.format(q);
          }
          if (trial % 2 == 0) {
            EXPECT_EQ(best[i], arg) << "m=" << m << " state " << s.format(q);
          }
        }
      }
    }
  }
}
