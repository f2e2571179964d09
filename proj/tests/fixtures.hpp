#pragma once

// Small integrator grid worlds used by the mission and simulator tests:
// unit cells, tau = 1, inputs {-1,0,1} per axis, so the undisturbed
// abstraction moves exactly one cell per axis and step.

#include "soc/abstraction.hpp"
#include "soc/mission.hpp"

namespace fixtures {

struct World {
  soc::SampledDynamics dyn;
  soc::Grid grid;
  soc::InputSet inputs;
  soc::RunningCostSpec cost;
  soc::AbstractSystem sys;
};

inline World integrator_world_1d(std::uint64_t n, double tau = 1.0, double wind = 0.0) {
  World w;
  w.dyn.model = soc::VehicleModel::integrator;
  w.dyn.state_dim = 1;
  w.dyn.input_dim = 1;
  w.dyn.tau = tau;
  w.dyn.input_bounds = soc::Box({-1.0 / tau}, {1.0 / tau});  // one cell per step
  w.dyn.disturbance = soc::Box({-wind}, {wind});
  w.dyn.jacobian_bound = {{0.0}};
  w.grid = soc::Grid(soc::Box({0.0}, {static_cast<double>(n)}), {n});
  w.inputs = soc::InputSet::uniform(w.dyn.input_bounds, {3});
  w.cost.tau = tau;
  w.cost.turn_weight = 0;
  w.sys = soc::build_abstraction(w.dyn, w.grid, w.inputs, w.cost);
  return w;
}

/* Disturbed worlds need control authority beyond the wind spill: with
 * moves of +-1 cell any wind keeps the source cell among the successors
 * and the min-max game cannot force progress, so pass input_span = 2 and
 * use targets at least 3 cells wide when wind > 0. */
inline World integrator_world_2d(std::uint64_t nx, std::uint64_t ny, double wind = 0.0,
                                 std::vector<soc::Box> blocked = {}, int input_span = 1) {
  World w;
  w.dyn.model = soc::VehicleModel::integrator;
  w.dyn.state_dim = 2;
  w.dyn.input_dim = 2;
  w.dyn.tau = 1.0;
  const auto s = static_cast<double>(input_span);
  w.dyn.input_bounds = soc::Box({-s, -s}, {s, s});
  w.dyn.disturbance = soc::Box({-wind, -wind}, {wind, wind});
  w.dyn.jacobian_bound = {{0.0, 0.0}, {0.0, 0.0}};
  w.grid = soc::Grid(
      soc::Box({0.0, 0.0}, {static_cast<double>(nx), static_cast<double>(ny)}), {nx, ny});
  const auto nv = static_cast<std::uint32_t>(2 * input_span + 1);
  w.inputs = soc::InputSet::uniform(w.dyn.input_bounds, {nv, nv});
  w.cost.tau = 1.0;
  w.cost.turn_weight = 0;
  w.cost.blocked = std::move(blocked);
  w.sys = soc::build_abstraction(w.dyn, w.grid, w.inputs, w.cost);
  return w;
}

/* box covering exactly the cells [cx0,cx1] x [cy0,cy1] of a unit grid */
inline soc::Box cell_box_2d(int cx0, int cy0, int cx1, int cy1) {
  return soc::Box({static_cast<double>(cx0), static_cast<double>(cy0)},
                  {static_cast<double>(cx1 + 1), static_cast<double>(cy1 + 1)});
}

}  // namespace fixtures
