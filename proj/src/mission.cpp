#include "soc/mission.hpp"

#include <algorithm>
#include <cmath>

#include "soc/errors.hpp"
#include "soc/parallel.hpp"

namespace soc {

void MissionSpec::validate(const Grid& grid) const {
  if (targets.size() < 2) throw validation_error("mission: need a depot and at least one customer");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    targets[i].validate("target " + std::to_string(i + 1));
    if (targets[i].dim() != grid.dim())
      throw validation_error("target " + std::to_string(i + 1) + ": dimension mismatch");
  }
  if (capacity < 1) throw validation_error("mission: capacity must be >= 1");
  if (num_vehicles && *num_vehicles < 1)
    throw validation_error("mission: num_vehicles must be >= 1");
  if (!(rho >= 0)) throw validation_error("mission: rho must be >= 0");
}

std::vector<std::vector<std::uint32_t>> realize_targets(const Grid& grid,
                                                        std::span<const Box> targets) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto cells64 = cells_inside(grid, targets[i]);
    if (cells64.empty())
      throw validation_error("target " + std::to_string(i + 1) +
                             " contains no grid cell (box too small for the grid)");
    std::vector<std::uint32_t> cells(cells64.begin(), cells64.end());
    out.push_back(std::move(cells));
  }
  return out;
}

bool MissionLeg::lookup(std::uint32_t cell, std::uint32_t& input, bool& stop) const {
  if (primary.defined(cell)) {
    input = primary.input[cell];
    stop = primary.stop[cell] != 0;
    return true;
  }
  if (fallback && fallback->defined(cell)) {
    input = fallback->input[cell];
    stop = fallback->stop[cell] != 0;
    return true;
  }
  return false;
}

double MissionLeg::terminal_at(std::uint32_t cell) const {
  const auto it = std::lower_bound(terminal.cells.begin(), terminal.cells.end(), cell);
  if (it == terminal.cells.end() || *it != cell) return kInf;
  return terminal.g0[static_cast<std::size_t>(it - terminal.cells.begin())];
}

namespace {

/* legs for one tour: target i with terminal = coverage value of the next
 * tour entry on the target's cells; final (depot) leg with terminal 0 */
struct LegTask {
  int target;        // 1-based
  int next;          // 1-based, 0 for the final leg
  double rho;        // localization radius, inf = none
  bool refine;
};

MissionLeg make_unrefined_leg(const CoverageSolution& cov, const LegTask& task) {
  MissionLeg leg;
  leg.target = task.target;
  const auto& entry = cov.targets[static_cast<std::size_t>(task.target - 1)];
  leg.value = entry.value;
  leg.primary = entry.controller;
  leg.terminal = TerminalCost::zero(entry.target_cells);
  return leg;
}

MissionLeg solve_leg(const AbstractSystem& sys, const MissionSpec& spec,
                     const CoverageSolution& cov, const LegTask& task) {
  if (!task.refine) return make_unrefined_leg(cov, task);

  MissionLeg leg;
  leg.target = task.target;
  const auto& entry = cov.targets[static_cast<std::size_t>(task.target - 1)];
  leg.terminal = (task.next == 0)
                     ? TerminalCost::zero(entry.target_cells)
                     : TerminalCost::on_cells(entry.target_cells,
                                              cov.targets[static_cast<std::size_t>(task.next - 1)].value);
  ReachSolution sol;
  if (std::isfinite(task.rho)) {
    const Box& tbox = spec.targets[static_cast<std::size_t>(task.target - 1)];
    const AbstractSystem localized = restrict_running_cost(sys, std::span(&tbox, 1), task.rho);
    sol = solve_reach(localized, leg.terminal);
    leg.fallback = entry.controller;
  } else {
    sol = solve_reach(sys, leg.terminal);
  }
  leg.value = std::move(sol.value);
  leg.primary = std::move(sol.controller);
  return leg;
}

std::vector<MissionController> solve_missions(const AbstractSystem& sys, const MissionSpec& spec,
                                              const CoverageSolution& cov, const TourPlan& plan,
                                              std::span<const int> active, double rho, bool refine,
                                              int threads) {
  // flatten legs over all tours, solve in parallel, then assemble
  struct Slot {
    std::size_t tour, pos;
    LegTask task;
  };
  std::vector<Slot> slots;
  for (std::size_t t = 0; t < plan.tours.size(); ++t) {
    const auto& seq = plan.tours[t].seq;
    for (std::size_t i = 1; i < seq.size(); ++i) {
      LegTask task;
      task.target = active[static_cast<std::size_t>(seq[i] - 1)];
      task.next = (i + 1 < seq.size()) ? active[static_cast<std::size_t>(seq[i + 1] - 1)] : 0;
      task.rho = rho;
      task.refine = refine;
      slots.push_back({t, i - 1, task});
    }
  }
  std::vector<MissionLeg> legs(slots.size());
  parallel_for(slots.size(), threads, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t k = b; k < e; ++k) legs[k] = solve_leg(sys, spec, cov, slots[k].task);
  });
  std::vector<MissionController> missions(plan.tours.size());
  for (std::size_t t = 0; t < plan.tours.size(); ++t) {
    missions[t].tour.seq.reserve(plan.tours[t].seq.size());
    for (int idx : plan.tours[t].seq)
      missions[t].tour.seq.push_back(active[static_cast<std::size_t>(idx - 1)]);
    missions[t].legs.resize(plan.tours[t].seq.size() - 1);
  }
  for (std::size_t k = 0; k < slots.size(); ++k)
    missions[slots[k].tour].legs[slots[k].pos] = std::move(legs[k]);
  return missions;
}

std::vector<int> all_targets(const CoverageSolution& cov) {
  std::vector<int> a(cov.n_targets());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>(i + 1);
  return a;
}

}  // namespace

MissionSynthesis synthesize_cvrp(const AbstractSystem& sys, const MissionSpec& spec,
                                 const CoverageSolution& cov, int threads) {
  spec.validate(sys.grid());
  MissionSynthesis out;
  out.matrix = cost_matrix_from_coverage(cov);
  out.plan = solve_cvrp(out.matrix, spec.capacity, spec.num_vehicles);
  const auto active = all_targets(cov);
  out.missions = solve_missions(sys, spec, cov, out.plan, active, kInf, true, threads);
  return out;
}

MissionSynthesis synthesize_cvrp(const AbstractSystem& sys, const MissionSpec& spec, int threads) {
  spec.validate(sys.grid());
  auto targets = realize_targets(sys.grid(), spec.targets);
  auto cov = solve_coverage(sys, std::move(targets), threads);
  if (!cov)
    throw infeasible_error("coverage failed: target " + std::to_string(cov.empty_target) +
                           " shrank to the empty set (problem can't be solved)");
  return synthesize_cvrp(sys, spec, cov.solution, threads);
}

MissionSynthesis synthesize_tsp_from_state(const AbstractSystem& sys, const MissionSpec& spec,
                                           const CoverageSolution& cov,
                                           std::span<const int> active, const Vec& x0, double rho,
                                           bool refine, int threads) {
  spec.validate(sys.grid());
  const std::uint32_t x0_cell = static_cast<std::uint32_t>(sys.grid().quantize(x0));
  MissionSynthesis out;
  out.matrix = cost_matrix_from_state_subset(cov, x0_cell, active);
  out.plan = solve_cvrp(out.matrix, kInfCapacity, 1);
  out.missions = solve_missions(sys, spec, cov, out.plan, active, rho, refine, threads);
  return out;
}

MissionSynthesis synthesize_tsp_from_state(const AbstractSystem& sys, const MissionSpec& spec,
                                           int threads) {
  spec.validate(sys.grid());
  if (!spec.initial_state) throw validation_error("tsp synthesis requires an initial state");
  auto targets = realize_targets(sys.grid(), spec.targets);
  auto cov = solve_coverage(sys, std::move(targets), threads);
  if (!cov)
    throw infeasible_error("coverage failed: target " + std::to_string(cov.empty_target) +
                           " shrank to the empty set (problem can't be solved)");
  const auto active = all_targets(cov.solution);
  return synthesize_tsp_from_state(sys, spec, cov.solution, active, *spec.initial_state, spec.rho,
                                   true, threads);
}

int greedy_value_policy(const CoverageSolution& cov, const std::vector<bool>& visited,
                        std::uint32_t x_cell) {
  int best = 1;
  double bestv = kInf;
  for (std::size_t i = 1; i < cov.n_targets(); ++i) {
    if (visited[i]) continue;
    const double v = cov.targets[i].value(x_cell);
    if (v < bestv) {
      bestv = v;
      best = static_cast<int>(i + 1);
    }
  }
  return best;
}

TakeoverPolicy takeover_policy_from_name(const std::string& name) {
  if (name == "algorithm2" || name == "tsp") return TakeoverPolicy::algorithm2;
  if (name == "greedy") return TakeoverPolicy::greedy;
  throw validation_error("unknown takeover policy '" + name + "'");
}

MissionController depot_return_mission(const CoverageSolution& cov) {
  MissionController mc;
  mc.tour.seq = {1, 1};
  MissionLeg leg;
  leg.target = 1;
  const auto& depot = cov.targets[0];
  leg.value = depot.value;
  leg.primary = depot.controller;
  leg.terminal = TerminalCost::zero(depot.target_cells);
  mc.legs.push_back(std::move(leg));
  return mc;
}

Reassignment reassign_on_failure(const AbstractSystem& sys, const CoverageSolution& cov,
                                 const MissionSpec& spec,
                                 std::span<const VehicleStatus> vehicles, int failed_vehicle,
                                 TakeoverPolicy policy, double rho, bool refine, int threads) {
  const auto& failed = vehicles[static_cast<std::size_t>(failed_vehicle)];
  int takeover = -1;
  double best = kInf;
  const std::size_t pos_dims = std::min<std::size_t>(2, failed.state.size());
  for (std::size_t v = 0; v < vehicles.size(); ++v) {
    if (static_cast<int>(v) == failed_vehicle || !vehicles[v].functioning) continue;
    double d2 = 0;
    for (std::size_t d = 0; d < pos_dims; ++d) {
      const double dd = vehicles[v].state[d] - failed.state[d];
      d2 += dd * dd;
    }
    if (d2 < best) {  // strict: ties keep the lowest vehicle index
      best = d2;
      takeover = static_cast<int>(v);
    }
  }
  if (takeover < 0) throw infeasible_error("reassignment: no functioning vehicle left");

  Reassignment re;
  re.policy = policy;
  re.takeover_vehicle = takeover;
  re.return_home = depot_return_mission(cov);

  std::vector<int> customers = failed.unvisited;
  const auto& tv = vehicles[static_cast<std::size_t>(takeover)];
  customers.insert(customers.end(), tv.unvisited.begin(), tv.unvisited.end());
  std::sort(customers.begin(), customers.end());
  customers.erase(std::unique(customers.begin(), customers.end()), customers.end());
  re.takeover_targets = {1};
  re.takeover_targets.insert(re.takeover_targets.end(), customers.begin(), customers.end());

  if (policy == TakeoverPolicy::algorithm2) {
    if (customers.empty()) {
      re.takeover_mission = depot_return_mission(cov);
    } else {
      auto synth = synthesize_tsp_from_state(sys, spec, cov, re.takeover_targets, tv.state, rho,
                                             refine, threads);
      re.takeover_mission = std::move(synth.missions.at(0));
    }
  }
  return re;
}

}  // namespace soc
