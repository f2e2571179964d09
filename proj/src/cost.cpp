#include "soc/cost.hpp"

#include <algorithm>
#include <cmath>

namespace soc {

double segment_distance(double px, double py, const Segment& s) {
  const double dx = s.x2 - s.x1, dy = s.y2 - s.y1;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0) t = std::clamp(((px - s.x1) * dx + (py - s.y1) * dy) / len2, 0.0, 1.0);
  const double cx = s.x1 + t * dx, cy = s.y1 + t * dy;
  return std::hypot(px - cx, py - cy);
}

double RunningCostSpec::finite_part(std::span<const double> y_next,
                                    std::span<const double> u) const {
  double g = tau;
  if (turn_weight != 0 && turn_input >= 0 && static_cast<std::size_t>(turn_input) < u.size()) {
    const double uturn = u[static_cast<std::size_t>(turn_input)];
    g += turn_weight * uturn * uturn;
  }
  if (lane_term && !lanes.empty()) {
    double dmin = kInf;
    for (const auto& s : lanes) dmin = std::min(dmin, segment_distance(y_next[0], y_next[1], s));
    g += dmin;
  }
  return g;
}

bool RunningCostSpec::blocked_state(std::span<const double> x) const {
  for (const auto& b : blocked)
    if (b.contains(x)) return true;
  return false;
}

bool RunningCostSpec::blocked_box(const Box& bx) const {
  for (const auto& b : blocked)
    if (b.intersects(bx)) return true;
  return false;
}

double RunningCostSpec::concrete(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> u) const {
  if (blocked_state(x)) return kInf;
  return finite_part(y, u);
}

}  // namespace soc
