#pragma once

#include <string>
#include <string_view>

#include "soc/cost.hpp"
#include "soc/dynamics.hpp"
#include "soc/mission.hpp"

namespace soc {

/* One scenario document holds the five configuration blocks: dynamics,
 * grid, cost, targets and routing. Angles are radians, everything else SI. */
struct Scenario {
  std::string name;
  SampledDynamics dynamics;
  Grid grid;
  InputSet inputs;
  RunningCostSpec cost;
  MissionSpec mission;

  // original planar rectangles, kept for plotting
  std::vector<Box> obstacles_plot;
  std::vector<Box> nofly_plot;

  std::uint64_t hash = 0;  // content hash of the source document
  std::string raw;         // source document bytes
};

std::uint64_t fnv1a64(std::string_view bytes);

Scenario parse_scenario(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::string& path);

}  // namespace soc
