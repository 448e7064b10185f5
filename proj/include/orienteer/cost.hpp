#ifndef ORIENTEER_COST_HPP
#define ORIENTEER_COST_HPP

#include <stdexcept>

#include "grid.hpp"
#include "race_map.hpp"

namespace orienteer {

/// Obstacle-penalized running cost: 1 on free nodes, 1/eps on obstacles and
/// outside the grid.
inline double running_cost(RaceMap const& map, double eps, Node node) {
  return map.is_obstacle(node) ? 1.0 / eps : 1.0;
}

/// Running cost tabulated per node.
struct CostField {
  double eps = 1e-3;
  ScalarGrid values;

  CostField() = default;
  CostField(RaceMap const& map, double eps_) : eps(eps_), values(map.rows(), map.cols(), 1.0) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (map.obstacle[i]) values[i] = 1.0 / eps;
    }
  }

  double max() const { return 1.0 / eps; }
};

}  // namespace orienteer

#endif  // ORIENTEER_COST_HPP
