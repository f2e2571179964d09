#pragma once

#include <optional>
#include <span>
#include <vector>

#include "soc/routing.hpp"

namespace soc {

struct MissionSpec {
  std::vector<Box> targets;  // full state-dimension boxes; index 0 is the depot (target 1)
  int capacity = kInfCapacity;
  std::optional<int> num_vehicles;
  std::optional<Vec> initial_state;
  double rho = kInf;

  void validate(const Grid& grid) const;
};

/* cells_inside per target box; throws when a target has no cell */
std::vector<std::vector<std::uint32_t>> realize_targets(const Grid& grid,
                                                        std::span<const Box> targets);

/* One reach-avoid leg of a scheduled mission. The scheduler switches to the
 * next leg when the active controller raises the stop flag. Cells where the
 * primary (possibly rho-localized) controller is undefined fall back to the
 * coverage controller of the same target. */
struct MissionLeg {
  int target = 1;  // 1-based target index
  ValueFunction value;
  MemorylessController primary;
  TerminalCost terminal;
  std::optional<MemorylessController> fallback;

  bool lookup(std::uint32_t cell, std::uint32_t& input, bool& stop) const;
  /* terminal value G0 at a cell of the leg's target set, +inf elsewhere */
  double terminal_at(std::uint32_t cell) const;
};

struct MissionController {
  Tour tour;  // realized tour, 1-based target indices
  std::vector<MissionLeg> legs;
};

struct MissionSynthesis {
  TourPlan plan;
  CostMatrix matrix;
  std::vector<MissionController> missions;  // one per tour
};

/* Tour synthesis over the coverage value functions: solve the coverage
 * problem, build the target-to-target cost matrix, solve the classical
 * CVRP on it, then chain per-leg reach solves whose terminal cost is the
 * next target's coverage value function restricted to the leg's target. */
MissionSynthesis synthesize_cvrp(const AbstractSystem& sys, const MissionSpec& spec,
                                 const CoverageSolution& cov, int threads = 1);
MissionSynthesis synthesize_cvrp(const AbstractSystem& sys, const MissionSpec& spec,
                                 int threads = 1);

/* Single-vehicle tour from an arbitrary initial state: row 1 of the cost
 * matrix is taken at the initial cell, the tour is a single Hamiltonian
 * tour, and each leg is re-solved with the running cost restricted to the
 * rho-neighbourhood of its target, falling back to the coverage controller
 * where the localized value is infinite. `active` lists the 1-based target
 * indices still to visit (must start with 1 = depot). refine=false skips
 * the per-leg re-solve and chains the coverage controllers directly. */
MissionSynthesis synthesize_tsp_from_state(const AbstractSystem& sys, const MissionSpec& spec,
                                           const CoverageSolution& cov,
                                           std::span<const int> active, const Vec& x0, double rho,
                                           bool refine = true, int threads = 1);
MissionSynthesis synthesize_tsp_from_state(const AbstractSystem& sys, const MissionSpec& spec,
                                           int threads = 1);

/* next unvisited target by lowest coverage value at the current cell;
 * ties to the lowest index; depot (1) once everything is visited.
 * visited[i] refers to target i+1. */
int greedy_value_policy(const CoverageSolution& cov, const std::vector<bool>& visited,
                        std::uint32_t x_cell);

enum class TakeoverPolicy { algorithm2, greedy };
TakeoverPolicy takeover_policy_from_name(const std::string& name);

struct VehicleStatus {
  Vec state;
  bool functioning = true;
  std::vector<int> unvisited;  // 1-based customer indices assigned and not yet visited
};

struct Reassignment {
  int takeover_vehicle = -1;
  MissionController return_home;                      // for the failed vehicle
  std::optional<MissionController> takeover_mission;  // algorithm2 policy
  std::vector<int> takeover_targets;                  // active list incl. depot
  TakeoverPolicy policy = TakeoverPolicy::algorithm2;
};

/* Transfers the failed vehicle's remaining targets to the functioning
 * vehicle nearest (planar Euclidean distance, ties to the lowest index) to
 * the failure location; the failed vehicle returns to the depot under its
 * coverage controller. */
Reassignment reassign_on_failure(const AbstractSystem& sys, const CoverageSolution& cov,
                                 const MissionSpec& spec,
                                 std::span<const VehicleStatus> vehicles, int failed_vehicle,
                                 TakeoverPolicy policy, double rho, bool refine = true,
                                 int threads = 1);

/* single-leg return-to-depot mission built from the coverage solution */
MissionController depot_return_mission(const CoverageSolution& cov);

}  // namespace soc
