#pragma once

#include <string>
#include <vector>

#include "soc/scenario.hpp"
#include "soc/simulator.hpp"

namespace soc {

/* Static picture of the mission area: obstacles dark, no-fly volumes
 * hatched gray, targets light green with the depot outlined, lane axes as
 * thin lines, one colored polyline per vehicle trajectory. */
void write_mission_svg(const std::string& path, const Scenario& sc,
                       const std::vector<Trajectory>& trajectories, double width_px = 900.0);

}  // namespace soc
