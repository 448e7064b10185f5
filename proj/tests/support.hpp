#ifndef ORIENTEER_TESTS_SUPPORT_HPP
#define ORIENTEER_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "orienteer/orienteer.hpp"

namespace orienteer::fixtures {

inline std::filesystem::path source_dir() { return ORIENTEER_SOURCE_DIR; }

inline RaceMap load_map_file(std::string const& name) {
  std::ifstream in(source_dir() / "maps" / name);
  if (!in) throw std::runtime_error("missing test map " + name);
  return parse_map(in);
}

// The 41x41 desk map: two rectangular obstacles, three checkpoints.
inline RaceMap const& desk_map() {
  static RaceMap const map = load_map_file("desk.txt");
  return map;
}

inline constexpr Point desk_start{0.3, 2.0};
inline constexpr double desk_horizon = 9.0;

// Exhaustive 8-neighbour tours, cross-checked with an independent networkx
// implementation (tests/fixtures/desk_oracle.py).
inline constexpr double desk_free_total = 7.701219330881975;
inline constexpr double desk_cross_total = 11.236753236814716;

inline ValueField const& desk_solution(RaceMode mode) {
  static ValueField const free_field = [] {
    StateSpace const space(3, RaceMode::FreeOrder);
    return solve_stationary(desk_map(), space, SolverConfig{});
  }();
  static ValueField const cross_field = [] {
    StateSpace const space(3, RaceMode::CrossCountry);
    return solve_stationary(desk_map(), space, SolverConfig{});
  }();
  return mode == RaceMode::FreeOrder ? free_field : cross_field;
}

// Empty square map with a single arrival node and no checkpoints.
inline RaceMap open_map(std::size_t n, double dx, Node arrival) {
  GridGeometry const g{n, n, dx, {0.0, 0.0}};
  return make_race_map(g, Grid<std::uint8_t>(n, n, std::uint8_t{0}), {}, {arrival});
}

inline std::filesystem::path scratch_dir(std::string const& name) {
  auto const dir = std::filesystem::temp_directory_path() / ("orienteer_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(std::filesystem::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace orienteer::fixtures

#endif  // ORIENTEER_TESTS_SUPPORT_HPP
