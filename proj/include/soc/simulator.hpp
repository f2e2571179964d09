#pragma once

#include <functional>
#include <string>
#include <vector>

#include "soc/mission.hpp"

namespace soc {

struct TrajectorySample {
  std::uint64_t t = 0;
  Vec x;
  Vec u;
  int v = 0;       // stop flag raised at this instant
  int leg = 0;     // 1-based active leg
  int target = 0;  // the active leg's target
  double cum_cost = 0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

/* header: t,x1,...,xn,u1,...,um,v,leg,target,cum_cost */
void write_trajectory_csv(const std::string& path, const Trajectory& traj, std::size_t state_dim,
                          std::size_t input_dim);

struct FailureInjection {
  int vehicle = 0;
  std::uint64_t step = 0;
};

struct SimConfig {
  DisturbancePolicy disturbance;
  std::uint64_t max_steps = 100000;
  std::vector<FailureInjection> failures;
  TakeoverPolicy policy = TakeoverPolicy::algorithm2;
  double rho = kInf;
  bool refine = true;
  int threads = 1;
};

struct LegRecord {
  int vehicle = 0;
  int leg_index = 0;  // 1-based
  int target = 0;
  std::uint64_t start_step = 0, stop_step = 0;
  std::uint32_t start_cell = 0, stop_cell = 0;
  double start_value = 0;       // leg value function at the start cell
  double accumulated = 0;       // running cost over the leg
  double terminal_at_stop = 0;  // G0 at the stop cell
  bool stopped = false;
  bool bound_ok = true;  // accumulated + terminal <= start_value + 1e-9
};

struct VisitRecord {
  int target = 0;
  int vehicle = 0;
  std::uint64_t step = 0;
};

struct MissionReport {
  std::vector<double> vehicle_cost;
  double total_cost = 0;
  std::vector<VisitRecord> visits;
  std::vector<LegRecord> legs;
  bool complete = false;
  std::vector<int> failed_vehicles;
  std::uint64_t end_step = 0;
  std::string note;
};

using DisturbanceDraw = std::function<Vec()>;

struct LegRunResult {
  Vec final_state;
  double accumulated = 0;
  bool stopped = false;
  std::uint32_t stop_cell = 0;
  std::uint64_t steps = 0;
};

/* Closed-loop execution of a single leg from x0: quantize, look up the
 * action, stop on the stop flag, otherwise integrate one sampling period
 * with a drawn disturbance and accumulate the concrete running cost.
 * Throws soundness_error when no action is defined at a reached cell;
 * stopped=false when max_steps ran out. */
LegRunResult run_leg(const SampledDynamics& dyn, const RunningCostSpec& cost, const Grid& grid,
                     const InputSet& inputs, const MissionLeg& leg, const Vec& x0,
                     const DisturbanceDraw& draw_w, std::uint64_t max_steps,
                     Trajectory* traj = nullptr, std::uint64_t t0 = 0, int leg_index = 1);

/* Lockstep multi-vehicle execution with failure injection. Vehicles run
 * their scheduled legs; on an injected failure the failed vehicle returns
 * to the depot and the nearest functioning vehicle takes over the union of
 * the not-yet-visited targets under cfg.policy. A target is visited when a
 * concrete state enters its box. */
MissionReport run_mission(const AbstractSystem& sys, const SampledDynamics& dyn,
                          const RunningCostSpec& cost, const MissionSpec& spec,
                          const CoverageSolution& cov, std::vector<MissionController> missions,
                          const SimConfig& cfg, std::vector<Trajectory>* trajectories = nullptr);

/* Empirical worst case of the cost functional over n_runs disturbance
 * realizations: the corners of W first (held constant over the run), then
 * seeded uniform draws. A sampled lower bound of the true supremum. */
double estimate_performance(const SampledDynamics& dyn, const RunningCostSpec& cost,
                            const Grid& grid, const InputSet& inputs,
                            const MissionController& mission, const Vec& x0, int n_runs,
                            std::uint64_t max_steps = 100000);

}  // namespace soc
