// Solves a free-order race on a map file and prints the optimal visiting order.
//
//   orienteer_quickstart maps/desk.txt 0.3 2

#include <fstream>
#include <iostream>
#include <string>

#include "orienteer/orienteer.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: " << argv[0] << " MAP X Y\n";
    return 1;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << "\n";
    return 1;
  }
  try {
    orienteer::RaceMap const map = orienteer::parse_map(in);
    orienteer::Point const start{std::stod(argv[2]), std::stod(argv[3])};

    orienteer::StateSpace const space(map.checkpoint_count(), orienteer::RaceMode::FreeOrder);
    orienteer::SolverConfig cfg;
    orienteer::ValueField const value = orienteer::solve_stationary(map, space, cfg);
    orienteer::Trajectory const race = orienteer::reconstruct(value, map, space, cfg, start, space.empty());

    double const v = orienteer::interpolate(value[0], map.geometry, start);
    std::cout << "iterations: " << value.iterations << (value.converged ? "" : " (not converged)") << "\n";
    std::cout << "minimal time: " << orienteer::implied_time(v, cfg.lambda) << "\n";
    std::cout << "order:";
    for (std::size_t j : race.visit_order()) std::cout << ' ' << j;
    std::cout << "\npath length: " << race.total_length << (race.finished ? "" : " (did not finish)") << "\n";
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
