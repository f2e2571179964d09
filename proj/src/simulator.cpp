#include "soc/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

#include "soc/errors.hpp"

namespace soc {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, p);
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj, std::size_t state_dim,
                          std::size_t input_dim) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw validation_error("cannot write " + path);
  std::string line = "t";
  for (std::size_t d = 1; d <= state_dim; ++d) line += ",x" + std::to_string(d);
  for (std::size_t d = 1; d <= input_dim; ++d) line += ",u" + std::to_string(d);
  line += ",v,leg,target,cum_cost\n";
  f << line;
  for (const auto& s : traj.samples) {
    line.clear();
    line += std::to_string(s.t);
    for (std::size_t d = 0; d < state_dim; ++d) {
      line += ',';
      append_double(line, d < s.x.size() ? s.x[d] : 0.0);
    }
    for (std::size_t d = 0; d < input_dim; ++d) {
      line += ',';
      append_double(line, d < s.u.size() ? s.u[d] : 0.0);
    }
    line += ',';
    line += std::to_string(s.v);
    line += ',';
    line += std::to_string(s.leg);
    line += ',';
    line += std::to_string(s.target);
    line += ',';
    append_double(line, s.cum_cost);
    line += '\n';
    f << line;
  }
  if (!f) throw validation_error("write failed: " + path);
}

LegRunResult run_leg(const SampledDynamics& dyn, const RunningCostSpec& cost, const Grid& grid,
                     const InputSet& inputs, const MissionLeg& leg, const Vec& x0,
                     const DisturbanceDraw& draw_w, std::uint64_t max_steps, Trajectory* traj,
                     std::uint64_t t0, int leg_index) {
  LegRunResult res;
  Vec x = x0;
  for (std::uint64_t k = 0;; ++k) {
    const auto cell = static_cast<std::uint32_t>(grid.quantize(x));
    std::uint32_t uidx = kNoInput;
    bool stop = false;
    if (!leg.lookup(cell, uidx, stop))
      throw soundness_error("run_leg: no action defined at cell " + std::to_string(cell) +
                            " (target " + std::to_string(leg.target) + ")");
    if (stop) {
      res.stopped = true;
      res.stop_cell = cell;
      res.steps = k;
      if (traj)
        traj->samples.push_back(
            {t0 + k, x, Vec(dyn.input_dim, 0.0), 1, leg_index, leg.target, res.accumulated});
      break;
    }
    if (k >= max_steps) {  // divergence: budget exhausted without a stop
      res.steps = k;
      break;
    }
    const Vec& u = inputs.values[uidx];
    if (traj)
      traj->samples.push_back({t0 + k, x, u, 0, leg_index, leg.target, res.accumulated});
    const Vec w = draw_w();
    Vec xn = step(dyn, x, u, w);
    res.accumulated += cost.concrete(x, xn, u);
    x = std::move(xn);
  }
  res.final_state = x;
  return res;
}

namespace {

MissionLeg coverage_leg(const CoverageSolution& cov, int target) {
  MissionLeg leg;
  leg.target = target;
  const auto& e = cov.targets[static_cast<std::size_t>(target - 1)];
  leg.value = e.value;
  leg.primary = e.controller;
  leg.terminal = TerminalCost::zero(e.target_cells);
  return leg;
}

}  // namespace

MissionReport run_mission(const AbstractSystem& sys, const SampledDynamics& dyn,
                          const RunningCostSpec& cost, const MissionSpec& spec,
                          const CoverageSolution& cov, std::vector<MissionController> missions,
                          const SimConfig& cfg, std::vector<Trajectory>* trajectories) {
  const Grid& grid = sys.grid();
  const InputSet& inputs = sys.inputs();
  const std::size_t nveh = missions.size();
  const std::size_t N = spec.targets.size();
  if (nveh == 0) throw validation_error("run_mission: no vehicles");

  struct VehicleRun {
    Vec x;
    MissionController mc;
    std::size_t leg = 0;
    bool greedy = false;
    std::vector<int> greedy_targets;
    std::optional<MissionLeg> greedy_leg;
    bool greedy_final = false;
    bool leg_active = false;
    std::uint64_t leg_start = 0;
    std::uint32_t leg_start_cell = 0;
    double leg_start_value = 0;
    double leg_cost = 0;
    int legs_completed = 0;
    bool done = false;
    bool failed = false;
    double cost_sum = 0;
    Trajectory traj;
    DisturbanceSampler sampler;

    VehicleRun(DisturbanceSampler s) : sampler(std::move(s)) {}
  };

  Vec start_state;
  if (spec.initial_state) {
    start_state = *spec.initial_state;
  } else {
    start_state = spec.targets[0].center();  // depot box center
  }

  std::vector<VehicleRun> veh;
  veh.reserve(nveh);
  for (std::size_t v = 0; v < nveh; ++v) {
    DisturbancePolicy pol = cfg.disturbance;
    pol.seed = cfg.disturbance.seed + 0x9e3779b9u * (v + 1);
    veh.emplace_back(DisturbanceSampler(pol, dyn.disturbance));
    veh[v].x = start_state;
    veh[v].mc = std::move(missions[v]);
  }

  MissionReport rep;
  rep.vehicle_cost.assign(nveh, 0.0);
  std::vector<bool> visited(N + 1, false);

  auto log_visits = [&](std::size_t v, std::uint64_t t) {
    for (std::size_t i = 0; i < N; ++i) {
      if (visited[i + 1]) continue;
      if (spec.targets[i].contains(veh[v].x)) {
        visited[i + 1] = true;
        rep.visits.push_back({static_cast<int>(i + 1), static_cast<int>(v), t});
      }
    }
  };
  for (std::size_t v = 0; v < nveh; ++v) log_visits(v, 0);

  auto unvisited_customers_of = [&](const VehicleRun& vr) {
    std::vector<int> out;
    if (vr.greedy) {
      for (int tgt : vr.greedy_targets)
        if (tgt >= 2 && !visited[static_cast<std::size_t>(tgt)]) out.push_back(tgt);
    } else {
      for (int tgt : vr.mc.tour.seq)
        if (tgt >= 2 && !visited[static_cast<std::size_t>(tgt)]) out.push_back(tgt);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  auto current_leg = [&](VehicleRun& vr) -> const MissionLeg* {
    if (vr.greedy) return vr.greedy_leg ? &*vr.greedy_leg : nullptr;
    return vr.leg < vr.mc.legs.size() ? &vr.mc.legs[vr.leg] : nullptr;
  };

  std::uint64_t t = 0;
  for (; t <= cfg.max_steps; ++t) {
    bool all_done = true;
    for (const auto& vr : veh)
      if (!vr.done) all_done = false;
    if (all_done) break;

    // failure injections at this sampling instant
    for (const auto& fi : cfg.failures) {
      if (fi.step != t) continue;
      const auto fv = static_cast<std::size_t>(fi.vehicle);
      if (fv >= nveh || veh[fv].failed || veh[fv].done) continue;
      veh[fv].failed = true;
      rep.failed_vehicles.push_back(fi.vehicle);
      std::vector<VehicleStatus> status(nveh);
      for (std::size_t v = 0; v < nveh; ++v) {
        status[v].state = veh[v].x;
        status[v].functioning = !veh[v].failed && !veh[v].done;
        status[v].unvisited = unvisited_customers_of(veh[v]);
      }
      try {
        Reassignment re = reassign_on_failure(sys, cov, spec, status, fi.vehicle, cfg.policy,
                                              cfg.rho, cfg.refine, cfg.threads);
        const auto tv = static_cast<std::size_t>(re.takeover_vehicle);
        veh[fv].mc = std::move(re.return_home);
        veh[fv].leg = 0;
        veh[fv].greedy = false;
        veh[fv].greedy_leg.reset();
        veh[fv].leg_active = false;
        if (cfg.policy == TakeoverPolicy::algorithm2) {
          veh[tv].mc = std::move(*re.takeover_mission);
          veh[tv].leg = 0;
          veh[tv].greedy = false;
          veh[tv].greedy_leg.reset();
        } else {
          veh[tv].greedy = true;
          veh[tv].greedy_targets = re.takeover_targets;
          veh[tv].greedy_leg.reset();
          veh[tv].greedy_final = false;
        }
        veh[tv].leg_active = false;
      } catch (const infeasible_error& e) {
        rep.note = std::string("reassignment failed: ") + e.what();
        veh[fv].mc = depot_return_mission(cov);
        veh[fv].leg = 0;
        veh[fv].greedy = false;
        veh[fv].greedy_leg.reset();
        veh[fv].leg_active = false;
      }
    }

    for (std::size_t v = 0; v < nveh; ++v) {
      VehicleRun& vr = veh[v];
      if (vr.done) continue;

      bool stop_fired = false;
      const MissionLeg* leg = nullptr;
      std::uint32_t uidx = kNoInput;
      std::uint64_t chain = 0;
      const std::uint64_t chain_limit = vr.mc.legs.size() + N + 4;
      while (true) {
        if (vr.greedy && !vr.greedy_leg) {
          // targets outside this vehicle's takeover set count as visited
          std::vector<bool> vis(cov.n_targets(), true);
          for (int tgt : vr.greedy_targets)
            if (tgt >= 2 && !visited[static_cast<std::size_t>(tgt)])
              vis[static_cast<std::size_t>(tgt - 1)] = false;
          const auto cell = static_cast<std::uint32_t>(grid.quantize(vr.x));
          const int next = greedy_value_policy(cov, vis, cell);
          vr.greedy_final = (next == 1);
          vr.greedy_leg = coverage_leg(cov, next);
          vr.leg_active = false;
        }
        leg = current_leg(vr);
        if (!leg) {
          vr.done = true;
          break;
        }
        const auto cell = static_cast<std::uint32_t>(grid.quantize(vr.x));
        if (!vr.leg_active) {
          vr.leg_active = true;
          vr.leg_start = t;
          vr.leg_start_cell = cell;
          vr.leg_start_value = leg->value(cell);
          vr.leg_cost = 0;
        }
        bool stop = false;
        if (!leg->lookup(cell, uidx, stop))
          throw soundness_error("run_mission: vehicle " + std::to_string(v) +
                                " reached cell " + std::to_string(cell) +
                                " with no defined action (leg target " +
                                std::to_string(leg->target) + ")");
        if (!stop) break;

        stop_fired = true;
        LegRecord lr;
        lr.vehicle = static_cast<int>(v);
        lr.leg_index = ++vr.legs_completed;
        lr.target = leg->target;
        lr.start_step = vr.leg_start;
        lr.stop_step = t;
        lr.start_cell = vr.leg_start_cell;
        lr.stop_cell = cell;
        lr.start_value = vr.leg_start_value;
        lr.accumulated = vr.leg_cost;
        lr.terminal_at_stop = leg->terminal_at(cell);
        lr.stopped = true;
        lr.bound_ok = !(std::isfinite(lr.start_value)) ||
                      lr.accumulated + lr.terminal_at_stop <= lr.start_value + 1e-9;
        rep.legs.push_back(lr);
        vr.leg_active = false;
        if (vr.greedy) {
          if (vr.greedy_final) {
            vr.done = true;
            break;
          }
          vr.greedy_leg.reset();
        } else {
          ++vr.leg;
        }
        if (++chain > chain_limit)
          throw soundness_error("run_mission: stop-switch chain did not terminate");
      }

      if (vr.done) {
        const int last_leg = std::max(1, vr.legs_completed);
        vr.traj.samples.push_back({t, vr.x, Vec(dyn.input_dim, 0.0), 1, last_leg,
                                   leg ? leg->target : 1, vr.cost_sum});
        continue;
      }

      // one sampling period under the selected input
      const Vec& u = inputs.values[uidx];
      vr.traj.samples.push_back({t, vr.x, u, stop_fired ? 1 : 0,
                                 vr.legs_completed + 1, leg->target, vr.cost_sum});
      const Vec w = vr.sampler.next();
      Vec xn = step(dyn, vr.x, u, w);
      const double g = cost.concrete(vr.x, xn, u);
      vr.leg_cost += g;
      vr.cost_sum += g;
      vr.x = std::move(xn);
      log_visits(v, t + 1);
    }
  }
  rep.end_step = t;

  bool customers_done = true;
  for (std::size_t i = 2; i <= N; ++i)
    if (!visited[i]) customers_done = false;
  bool functioning_home = true;
  for (const auto& vr : veh)
    if (!vr.failed && !vr.done) functioning_home = false;
  rep.complete = customers_done && functioning_home;
  if (!rep.complete && rep.note.empty() && t > cfg.max_steps)
    rep.note = "max_steps exceeded before mission completion";

  rep.total_cost = 0;
  for (std::size_t v = 0; v < nveh; ++v) {
    rep.vehicle_cost[v] = veh[v].cost_sum;
    rep.total_cost += veh[v].cost_sum;
  }
  if (trajectories) {
    trajectories->clear();
    for (auto& vr : veh) trajectories->push_back(std::move(vr.traj));
  }
  return rep;
}

double estimate_performance(const SampledDynamics& dyn, const RunningCostSpec& cost,
                            const Grid& grid, const InputSet& inputs,
                            const MissionController& mission, const Vec& x0, int n_runs,
                            std::uint64_t max_steps) {
  if (n_runs < 1) throw validation_error("estimate_performance: n_runs must be >= 1");
  // corner schedule over the disturbance dimensions with nonzero width
  std::vector<std::size_t> wdims;
  for (std::size_t d = 0; d < dyn.disturbance.dim(); ++d)
    if (dyn.disturbance.width(d) > 0) wdims.push_back(d);
  const std::uint64_t corners = wdims.size() >= 20 ? 0 : (std::uint64_t(1) << wdims.size());

  double worst = -kInf;
  for (int r = 0; r < n_runs; ++r) {
    DisturbanceDraw draw;
    DisturbanceSampler sampler(
        DisturbancePolicy{DisturbancePolicy::Mode::uniform_random, static_cast<std::uint64_t>(r)},
        dyn.disturbance);
    if (static_cast<std::uint64_t>(r) < corners) {
      Vec w(dyn.disturbance.dim(), 0.0);
      for (std::size_t d = 0; d < dyn.disturbance.dim(); ++d) w[d] = dyn.disturbance.lower[d];
      for (std::size_t b = 0; b < wdims.size(); ++b)
        if (r & (1 << b)) w[wdims[b]] = dyn.disturbance.upper[wdims[b]];
      draw = [w]() { return w; };
    } else {
      draw = [&sampler]() { return sampler.next(); };
    }
    double total = 0;
    Vec x = x0;
    bool ok = true;
    std::uint64_t t0 = 0;
    for (std::size_t li = 0; li < mission.legs.size(); ++li) {
      auto res = run_leg(dyn, cost, grid, inputs, mission.legs[li], x, draw, max_steps, nullptr,
                         t0, static_cast<int>(li + 1));
      if (!res.stopped) {
        ok = false;
        break;
      }
      total += res.accumulated;
      x = res.final_state;
      t0 += res.steps;
    }
    worst = std::max(worst, ok ? total : kInf);
  }
  return worst;
}

}  // namespace soc
