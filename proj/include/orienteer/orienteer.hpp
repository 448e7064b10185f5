#ifndef ORIENTEER_ORIENTEER_HPP
#define ORIENTEER_ORIENTEER_HPP

#include "config.hpp"
#include "cost.hpp"
#include "grid.hpp"
#include "interpolate.hpp"
#include "oracle.hpp"
#include "race_map.hpp"
#include "scheme.hpp"
#include "states.hpp"
#include "stationary.hpp"
#include "time_dependent.hpp"
#include "trajectory.hpp"

#endif  // ORIENTEER_ORIENTEER_HPP
