#pragma once

#include <limits>
#include <span>
#include <vector>

#include "soc/grid.hpp"

namespace soc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/* planar segment, used for the lane-attraction term */
struct Segment {
  double x1, y1, x2, y2;
};

double segment_distance(double px, double py, const Segment& s);

/* Per-transition running cost g(x,y,u).  g = inf when the source state x
 * lies in a blocked region (obstacle, no-fly volume, speed-limit violation,
 * outside the mission area); otherwise
 *   g = tau + turn_weight*u[turn_input]^2 + min over lane segments of the
 *       planar distance of the successor position (when lanes are present). */
struct RunningCostSpec {
  double tau = 0.1;
  double turn_weight = 1.0;
  int turn_input = 1;
  bool lane_term = false;
  std::vector<Segment> lanes;
  std::vector<Box> blocked;  // full state-dimension boxes, wrap already split

  double finite_part(std::span<const double> y_next, std::span<const double> u) const;
  bool blocked_state(std::span<const double> x) const;
  bool blocked_box(const Box& b) const;  // closed-box intersection with any blocked region
  double concrete(std::span<const double> x, std::span<const double> y,
                  std::span<const double> u) const;
};

}  // namespace soc
