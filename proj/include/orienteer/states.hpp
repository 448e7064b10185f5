#ifndef ORIENTEER_STATES_HPP
#define ORIENTEER_STATES_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grid.hpp"
#include "race_map.hpp"

namespace orienteer {

/// Set of visited checkpoints. Bit j-1 stands for checkpoint j.
struct StateMask {
  std::uint32_t bits = 0;

  constexpr bool has(std::size_t checkpoint_index) const {
    return (bits >> checkpoint_index) & 1u;
  }
  constexpr int popcount() const { return std::popcount(bits); }
  constexpr bool subset_of(StateMask other) const { return (bits & ~other.bits) == 0; }

  friend constexpr bool operator==(StateMask, StateMask) = default;
  friend constexpr auto operator<=>(StateMask, StateMask) = default;
};

/// Checkpoint indices (0-based) set in `after` but not in `before`.
inline std::vector<std::size_t> newly_visited(StateMask before, StateMask after) {
  std::vector<std::size_t> out;
  std::uint32_t diff = after.bits & ~before.bits;
  while (diff) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(diff)));
    diff &= diff - 1;
  }
  return out;
}

enum class RaceMode { CrossCountry, FreeOrder };

inline std::string_view to_string(RaceMode mode) {
  return mode == RaceMode::CrossCountry ? "cross" : "free";
}

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr std::size_t max_checkpoints = 20;

/// Discrete state set of the hybrid system.
///
/// FreeOrder holds every bitmask (canonical index = mask value). CrossCountry
/// holds the m+1 prefix masks (canonical index = number of visited checkpoints).
class StateSpace {
 public:
  StateSpace(std::size_t m, RaceMode mode) : m_(m), mode_(mode) {
    if (m > max_checkpoints) {
      throw ConfigError("checkpoint count " + std::to_string(m) + " exceeds the cap of " +
                        std::to_string(max_checkpoints));
    }
    full_ = StateMask{m == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << m) - 1)};
    if (mode == RaceMode::FreeOrder) {
      states_.reserve(std::size_t{1} << m);
      for (std::uint32_t b = 0; b <= full_.bits; ++b) {
        states_.push_back({b});
        if (b == full_.bits) break;
      }
    } else {
      for (std::size_t k = 0; k <= m; ++k) {
        states_.push_back({static_cast<std::uint32_t>((std::uint64_t{1} << k) - 1)});
      }
    }
  }

  std::size_t checkpoint_count() const { return m_; }
  RaceMode mode() const { return mode_; }
  std::size_t size() const { return states_.size(); }
  StateMask full() const { return full_; }
  StateMask empty() const { return {}; }
  StateMask state(std::size_t index) const { return states_.at(index); }
  std::vector<StateMask> const& states() const { return states_; }

  bool contains(StateMask q) const {
    if (!q.subset_of(full_)) return false;
    if (mode_ == RaceMode::FreeOrder) return true;
    return (q.bits & (q.bits + 1)) == 0;
  }

  /// Canonical index of a state; throws DomainError if q is not a state.
  std::size_t index_of(StateMask q) const {
    if (!contains(q)) throw DomainError("mask " + format(q) + " is not a discrete state");
    return mode_ == RaceMode::FreeOrder ? q.bits : static_cast<std::size_t>(q.popcount());
  }

  /// Bit string with checkpoint 1 first, e.g. "0001011".
  std::string format(StateMask q) const {
    std::string s(m_, '0');
    for (std::size_t j = 0; j < m_; ++j) {
      if (q.has(j)) s[j] = '1';
    }
    return s;
  }

  StateMask parse(std::string_view bits) const {
    if (bits.size() != m_) throw DomainError("state string has wrong length");
    StateMask q;
    for (std::size_t j = 0; j < m_; ++j) {
      if (bits[j] == '1') {
        q.bits |= 1u << j;
      } else if (bits[j] != '0') {
        throw DomainError("state string must contain only 0 and 1");
      }
    }
    if (!contains(q)) throw DomainError("state " + std::string(bits) + " is not a discrete state");
    return q;
  }

 private:
  std::size_t m_;
  RaceMode mode_;
  StateMask full_;
  std::vector<StateMask> states_;
};

inline StateSpace enumerate_states(std::size_t m, RaceMode mode) { return StateSpace(m, mode); }

/// Permitted switches from q, sorted by canonical index.
inline std::vector<StateMask> permitted_switches(StateSpace const& space, StateMask q) {
  space.index_of(q);
  std::vector<StateMask> out;
  if (q == space.full()) return out;
  if (space.mode() == RaceMode::CrossCountry) {
    out.push_back({(q.bits << 1) | 1u});
    return out;
  }
  // Strict supersets, ascending by mask value.
  std::uint32_t const free_bits = space.full().bits & ~q.bits;
  for (std::uint32_t add = free_bits; add != 0; add = (add - 1) & free_bits) {
    out.push_back({q.bits | add});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Penalized switching cost. `reward` is subtracted per newly visited
/// checkpoint (zero for cross-country and free-order races).
struct SwitchCost {
  double eps = 1e-3;
  double reward = 0.0;
};

/// Cost of claiming checkpoint j from point x.
inline double claim_cost(SwitchCost const& cost, Point x, Point checkpoint) {
  return distance(x, checkpoint) / cost.eps - cost.reward;
}

inline double switching_cost(SwitchCost const& cost, StateSpace const& space, RaceMap const& map,
                             Point x, StateMask q, StateMask q_next) {
  space.index_of(q);
  space.index_of(q_next);
  bool permitted = q != q_next && q.subset_of(q_next);
  if (permitted && space.mode() == RaceMode::CrossCountry) {
    permitted = q_next.popcount() == q.popcount() + 1;
  }
  if (!permitted) {
    throw DomainError("switch " + space.format(q) + " -> " + space.format(q_next) +
                      " is not permitted");
  }
  double total = 0.0;
  for (std::size_t j : newly_visited(q, q_next)) total += claim_cost(cost, x, map.checkpoints[j]);
  return total;
}

}  // namespace orienteer

#endif  // ORIENTEER_STATES_HPP
