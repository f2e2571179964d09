// socroute: correct-by-design routing controllers for disturbed vehicles.
// Pipeline: abstract -> coverage -> synth (cvrp|tsp) -> simulate -> plot.
// Artifacts are content-addressed by the scenario hash; stale artifacts are
// rejected with a hint naming the command to re-run.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "soc/abstraction.hpp"
#include "soc/coverage.hpp"
#include "soc/mission.hpp"
#include "soc/parallel.hpp"
#include "soc/scenario.hpp"
#include "soc/simulator.hpp"
#include "soc/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace soc;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dependency_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw validation_error("cannot write " + path);
  f << content;
  if (!f) throw validation_error("write failed: " + path);
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

Scenario load_dir_scenario(const std::string& dir) {
  const auto path = dir + "/scenario.json";
  if (!fs::exists(path))
    throw dependency_error(dir + ": no scenario.json (run 'socroute abstract' first)");
  return load_scenario(path);
}

void check_hash(const json& manifest, const Scenario& sc, const std::string& what,
                const std::string& producer) {
  if (!manifest.contains("scenario_hash") ||
      manifest["scenario_hash"].get<std::string>() != hash_hex(sc.hash))
    throw dependency_error(what + " is stale for this scenario (re-run 'socroute " + producer +
                           "')");
}

json load_manifest(const std::string& path, const std::string& producer) {
  if (!fs::exists(path))
    throw dependency_error(path + " missing (run 'socroute " + producer + "' first)");
  return json::parse(read_file(path));
}

AbstractSystem load_dir_abstraction(const std::string& dir, const Scenario& sc) {
  const auto meta = load_manifest(dir + "/meta.json", "abstract");
  check_hash(meta, sc, dir + "/abstraction.bin", "abstract");
  return AbstractSystem::load(dir + "/abstraction.bin", sc.grid, sc.inputs);
}

std::string index3(const char* stem, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03zu", stem, i);
  return buf;
}

void save_coverage(const std::string& dir, const Scenario& sc, const CoverageSolution& cov) {
  fs::create_directories(dir + "/coverage");
  json manifest;
  manifest["scenario_hash"] = hash_hex(sc.hash);
  manifest["reach_solves"] = cov.reach_solves;
  json jt = json::array();
  for (std::size_t i = 0; i < cov.n_targets(); ++i) {
    const auto vf = "coverage/" + index3("vf_", i + 1) + ".bin";
    const auto ct = "coverage/" + index3("ct_", i + 1) + ".bin";
    cov.targets[i].value.dump(dir + "/" + vf, sc.grid);
    cov.targets[i].controller.dump(dir + "/" + ct, sc.grid);
    json e;
    e["index"] = i + 1;
    e["aprime_count"] = cov.targets[i].target_cells.size();
    e["aprime_cells"] = cov.targets[i].target_cells;
    e["value_file"] = vf;
    e["controller_file"] = ct;
    jt.push_back(e);
  }
  manifest["targets"] = jt;
  write_file(dir + "/coverage/manifest.json", manifest.dump(2) + "\n");
}

CoverageSolution load_dir_coverage(const std::string& dir, const Scenario& sc) {
  const auto manifest = load_manifest(dir + "/coverage/manifest.json", "coverage");
  check_hash(manifest, sc, dir + "/coverage", "coverage");
  CoverageSolution cov;
  cov.reach_solves = manifest["reach_solves"].get<int>();
  for (const auto& e : manifest["targets"]) {
    CoverageSolution::Entry entry;
    entry.value = ValueFunction::load(dir + "/" + e["value_file"].get<std::string>(), sc.grid);
    entry.controller =
        MemorylessController::load(dir + "/" + e["controller_file"].get<std::string>(), sc.grid);
    entry.target_cells = e["aprime_cells"].get<std::vector<std::uint32_t>>();
    cov.targets.push_back(std::move(entry));
  }
  if (cov.n_targets() != sc.mission.targets.size())
    throw dependency_error(dir + "/coverage: target count mismatch (re-run 'socroute coverage')");
  return cov;
}

void save_mission(const std::string& dir, const Scenario& sc, const std::string& algorithm,
                  const MissionSynthesis& syn, const CoverageSolution& cov, double rho,
                  bool refine, const Vec* from) {
  fs::create_directories(dir + "/mission");
  json manifest;
  manifest["scenario_hash"] = hash_hex(sc.hash);
  manifest["algorithm"] = algorithm;
  manifest["certified"] = syn.plan.certified;
  manifest["matrix_total_cost"] = syn.plan.total_cost;
  manifest["refine"] = refine;
  if (std::isfinite(rho)) manifest["rho"] = rho;
  if (from) manifest["from"] = *from;
  json jc = json::array();
  for (std::size_t i = 1; i <= syn.matrix.n; ++i) {
    json row = json::array();
    for (std::size_t j = 1; j <= syn.matrix.n; ++j) {
      const double v = syn.matrix.at(static_cast<int>(i), static_cast<int>(j));
      row.push_back(std::isfinite(v) ? json(v) : json("inf"));
    }
    jc.push_back(row);
  }
  manifest["cost_matrix"] = jc;
  json jm = json::array();
  for (std::size_t t = 0; t < syn.missions.size(); ++t) {
    const auto& mc = syn.missions[t];
    json jt;
    jt["tour"] = mc.tour.seq;
    json legs = json::array();
    for (std::size_t l = 0; l < mc.legs.size(); ++l) {
      const auto& leg = mc.legs[l];
      char stem[32];
      std::snprintf(stem, sizeof(stem), "mission/t%02zu_l%02zu", t + 1, l + 1);
      const std::string vf = std::string(stem) + "_vf.bin";
      const std::string ct = std::string(stem) + "_ct.bin";
      leg.value.dump(dir + "/" + vf, sc.grid);
      leg.primary.dump(dir + "/" + ct, sc.grid);
      json jl;
      jl["target"] = leg.target;
      jl["next"] = (l + 1 < mc.legs.size()) ? mc.legs[l + 1].target : 0;
      jl["value_file"] = vf;
      jl["controller_file"] = ct;
      jl["fallback"] = leg.fallback.has_value();
      // worst-case leg value at the start: over the previous leg's target
      // cells, or at the initial cell for leg 1
      double bound = 0;
      if (l == 0) {
        if (from) {
          bound = leg.value(static_cast<std::uint32_t>(sc.grid.quantize(*from)));
        } else if (sc.mission.initial_state) {
          bound = leg.value(static_cast<std::uint32_t>(sc.grid.quantize(*sc.mission.initial_state)));
        } else {
          for (auto c : cov.targets[0].target_cells) bound = std::max(bound, leg.value(c));
        }
      } else {
        const auto prev = static_cast<std::size_t>(mc.legs[l - 1].target - 1);
        for (auto c : cov.targets[prev].target_cells) bound = std::max(bound, leg.value(c));
      }
      jl["start_value"] = std::isfinite(bound) ? json(bound) : json("inf");
      legs.push_back(jl);
    }
    jt["legs"] = legs;
    jm.push_back(jt);
  }
  manifest["missions"] = jm;
  write_file(dir + "/mission/manifest.json", manifest.dump(2) + "\n");
}

std::vector<MissionController> load_dir_missions(const std::string& dir, const Scenario& sc,
                                                 const CoverageSolution& cov, json& manifest_out) {
  const auto manifest = load_manifest(dir + "/mission/manifest.json", "synth");
  check_hash(manifest, sc, dir + "/mission", "synth");
  std::vector<MissionController> missions;
  for (const auto& jt : manifest["missions"]) {
    MissionController mc;
    mc.tour.seq = jt["tour"].get<std::vector<int>>();
    for (const auto& jl : jt["legs"]) {
      MissionLeg leg;
      leg.target = jl["target"].get<int>();
      const int next = jl["next"].get<int>();
      leg.value = ValueFunction::load(dir + "/" + jl["value_file"].get<std::string>(), sc.grid);
      leg.primary =
          MemorylessController::load(dir + "/" + jl["controller_file"].get<std::string>(), sc.grid);
      const auto& entry = cov.targets[static_cast<std::size_t>(leg.target - 1)];
      leg.terminal =
          (next == 0) ? TerminalCost::zero(entry.target_cells)
                      : TerminalCost::on_cells(
                            entry.target_cells,
                            cov.targets[static_cast<std::size_t>(next - 1)].value);
      if (jl["fallback"].get<bool>()) leg.fallback = entry.controller;
      mc.legs.push_back(std::move(leg));
    }
    missions.push_back(std::move(mc));
  }
  manifest_out = manifest;
  return missions;
}

struct SimOptions {
  std::uint64_t seed = 1;
  int runs = 1;
  std::vector<std::string> fails;
  std::uint64_t max_steps = 100000;
  double rho = -1;  // -1: take from the scenario routing block
  bool no_refine = false;
  int threads = 1;
};

json simulate_policy(const std::string& dir, const Scenario& sc, const AbstractSystem& sys,
                     const CoverageSolution& cov, const std::vector<MissionController>& missions,
                     const SimOptions& opt, TakeoverPolicy policy, const std::string& tag,
                     std::vector<std::string>& traj_files) {
  SimConfig cfg;
  cfg.max_steps = opt.max_steps;
  cfg.policy = policy;
  cfg.rho = opt.rho >= 0 ? opt.rho : sc.mission.rho;
  cfg.refine = !opt.no_refine;
  cfg.threads = opt.threads;
  for (const auto& f : opt.fails) {
    const auto colon = f.find(':');
    if (colon == std::string::npos)
      throw validation_error("--fail expects vehicle:step, got '" + f + "'");
    cfg.failures.push_back({std::stoi(f.substr(0, colon)),
                            static_cast<std::uint64_t>(std::stoull(f.substr(colon + 1)))});
  }

  json runs = json::array();
  bool all_complete = true;
  bool all_bounds = true;
  double worst = 0, sum = 0;
  for (int r = 0; r < opt.runs; ++r) {
    cfg.disturbance.mode = DisturbancePolicy::Mode::uniform_random;
    cfg.disturbance.seed = opt.seed + static_cast<std::uint64_t>(r);
    std::vector<Trajectory> trajs;
    const auto rep =
        run_mission(sys, sc.dynamics, sc.cost, sc.mission, cov, missions, cfg, &trajs);
    json jr;
    jr["seed"] = cfg.disturbance.seed;
    jr["complete"] = rep.complete;
    jr["total_cost"] = rep.total_cost;
    jr["vehicle_cost"] = rep.vehicle_cost;
    jr["end_step"] = rep.end_step;
    bool bounds = true;
    for (const auto& lr : rep.legs) bounds = bounds && lr.bound_ok;
    jr["cost_bound_ok"] = bounds;
    if (!rep.note.empty()) jr["note"] = rep.note;
    if (r == 0) {
      json legs = json::array();
      for (const auto& lr : rep.legs) {
        json jl;
        jl["vehicle"] = lr.vehicle;
        jl["leg"] = lr.leg_index;
        jl["target"] = lr.target;
        jl["start_step"] = lr.start_step;
        jl["stop_step"] = lr.stop_step;
        jl["start_value"] = std::isfinite(lr.start_value) ? json(lr.start_value) : json("inf");
        jl["accumulated"] = lr.accumulated;
        jl["terminal_at_stop"] = lr.terminal_at_stop;
        jl["bound_ok"] = lr.bound_ok;
        legs.push_back(jl);
      }
      jr["legs"] = legs;
      json visits = json::array();
      for (const auto& v : rep.visits)
        visits.push_back({{"target", v.target}, {"vehicle", v.vehicle}, {"step", v.step}});
      jr["visits"] = visits;
      for (std::size_t v = 0; v < trajs.size(); ++v) {
        char name[64];
        std::snprintf(name, sizeof(name), "sim/traj_%s_r%03d_v%zu.csv", tag.c_str(), r, v);
        write_trajectory_csv(dir + "/" + name, trajs[v], sc.grid.dim(), sc.dynamics.input_dim);
        traj_files.push_back(name);
      }
    }
    all_complete = all_complete && rep.complete;
    all_bounds = all_bounds && bounds;
    worst = std::max(worst, rep.total_cost);
    sum += rep.total_cost;
    runs.push_back(jr);
  }
  json out;
  out["runs"] = runs;
  out["all_complete"] = all_complete;
  out["all_cost_bounds_ok"] = all_bounds;
  out["worst_total_cost"] = worst;
  out["mean_total_cost"] = sum / opt.runs;
  return out;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"symbolic optimal control for vehicle routing"};
  app.require_subcommand(1);
  app.fallthrough();  // parent options accepted after the subcommand
  int threads = hardware_threads();
  app.add_option("--threads", threads, "worker thread cap")->capture_default_str();

  auto* cmd_abs = app.add_subcommand("abstract", "build and cache the finite abstraction");
  cmd_abs->fallthrough();
  std::string scenario_path, out_dir;
  cmd_abs->add_option("scenario", scenario_path, "scenario file")->required();
  cmd_abs->add_option("-o,--out", out_dir, "artifact directory")->required();

  auto* cmd_cov = app.add_subcommand("coverage", "solve the coverage fixed point");
  cmd_cov->fallthrough();
  std::string cov_dir;
  cmd_cov->add_option("dir", cov_dir, "artifact directory")->required();

  auto* cmd_synth = app.add_subcommand("synth", "synthesize mission controllers");
  cmd_synth->fallthrough();
  cmd_synth->require_subcommand(1);
  auto* cmd_cvrp = cmd_synth->add_subcommand("cvrp", "capacitated tours from the depot");
  cmd_cvrp->fallthrough();
  auto* cmd_tsp = cmd_synth->add_subcommand("tsp", "single tour from an arbitrary state");
  cmd_tsp->fallthrough();
  std::string synth_dir_cvrp, synth_dir_tsp;
  int opt_vehicles = -1, opt_capacity = -2;
  cmd_cvrp->add_option("dir", synth_dir_cvrp, "artifact directory")->required();
  cmd_cvrp->add_option("--vehicles", opt_vehicles, "exact number of tours");
  cmd_cvrp->add_option("--capacity", opt_capacity, "vehicle capacity (-1 = unbounded)");
  double opt_rho = -1;
  std::string opt_from;
  bool opt_norefine = false;
  cmd_tsp->add_option("dir", synth_dir_tsp, "artifact directory")->required();
  cmd_tsp->add_option("--rho", opt_rho, "localization radius");
  cmd_tsp->add_option("--from", opt_from, "initial state x1,x2,...");
  cmd_tsp->add_flag("--no-refine", opt_norefine, "chain coverage controllers without re-solving");

  auto* cmd_sim = app.add_subcommand("simulate", "closed-loop mission execution");
  cmd_sim->fallthrough();
  std::string sim_dir;
  SimOptions sopt;
  cmd_sim->add_option("dir", sim_dir, "artifact directory")->required();
  cmd_sim->add_option("--seed", sopt.seed, "base disturbance seed")->capture_default_str();
  cmd_sim->add_option("--runs", sopt.runs, "number of seeded runs")->capture_default_str();
  cmd_sim->add_option("--fail", sopt.fails, "failure injection vehicle:step (repeatable)");
  std::string sim_policy = "algorithm2";
  cmd_sim->add_option("--policy", sim_policy, "takeover policy: algorithm2|greedy|both")
      ->capture_default_str();
  cmd_sim->add_option("--max-steps", sopt.max_steps, "step budget per run");
  cmd_sim->add_option("--rho", sopt.rho, "localization radius for takeover synthesis");
  cmd_sim->add_flag("--no-refine", sopt.no_refine, "skip leg refinement in takeover synthesis");

  auto* cmd_plot = app.add_subcommand("plot", "render the mission area and trajectories");
  cmd_plot->fallthrough();
  std::string plot_dir, plot_out;
  cmd_plot->add_option("dir", plot_dir, "artifact directory")->required();
  cmd_plot->add_option("-o,--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (cmd_abs->parsed()) {
    Stopwatch sw;
    const auto sc = load_scenario(scenario_path);
    std::printf("[abstract] scenario '%s' (%s): %" PRIu64 " cells x %u inputs\n", sc.name.c_str(),
                hash_hex(sc.hash).c_str(), sc.grid.n_cells(), sc.inputs.size());
    const auto sys = build_abstraction(sc.dynamics, sc.grid, sc.inputs, sc.cost, threads);
    fs::create_directories(out_dir);
    write_file(out_dir + "/scenario.json", sc.raw);
    sys.dump(out_dir + "/abstraction.bin");
    json meta;
    meta["scenario_hash"] = hash_hex(sc.hash);
    meta["name"] = sc.name;
    meta["cells"] = sys.n_cells();
    meta["inputs"] = sys.n_inputs();
    meta["transitions"] = sys.transitions().succ.size();
    write_file(out_dir + "/meta.json", meta.dump(2) + "\n");
    std::printf("[abstract] %zu transitions in %.1fs -> %s\n", sys.transitions().succ.size(),
                sw.secs(), out_dir.c_str());
    return 0;
  }

  if (cmd_cov->parsed()) {
    Stopwatch sw;
    const auto sc = load_dir_scenario(cov_dir);
    const auto sys = load_dir_abstraction(cov_dir, sc);
    auto targets = realize_targets(sc.grid, sc.mission.targets);
    std::printf("[coverage] %zu targets on %u cells\n", targets.size(), sys.n_cells());
    auto out = solve_coverage(sys, std::move(targets), threads);
    if (!out.ok)
      throw infeasible_error("coverage failed: target " + std::to_string(out.empty_target) +
                             " shrank to the empty set (problem can't be solved)");
    save_coverage(cov_dir, sc, out.solution);
    std::printf("[coverage] %d reach solves in %.1fs -> %s/coverage\n", out.reach_solves,
                sw.secs(), cov_dir.c_str());
    return 0;
  }

  if (cmd_synth->parsed()) {
    Stopwatch sw;
    const bool is_tsp = cmd_tsp->parsed();
    const std::string dir = is_tsp ? synth_dir_tsp : synth_dir_cvrp;
    auto sc = load_dir_scenario(dir);
    const auto sys = load_dir_abstraction(dir, sc);
    const auto cov = load_dir_coverage(dir, sc);
    if (!is_tsp) {
      if (opt_vehicles >= 0) sc.mission.num_vehicles = opt_vehicles;
      if (opt_capacity != -2) sc.mission.capacity = opt_capacity < 0 ? kInfCapacity : opt_capacity;
      const auto syn = synthesize_cvrp(sys, sc.mission, cov, threads);
      save_mission(dir, sc, "cvrp", syn, cov, kInf, true, nullptr);
      std::printf("[synth cvrp] %zu tours, matrix cost %.3f%s, %.1fs\n", syn.plan.tours.size(),
                  syn.plan.total_cost, syn.plan.certified ? " (exact)" : " (heuristic)",
                  sw.secs());
      for (const auto& t : syn.plan.tours) {
        std::printf("  tour:");
        for (int i : t.seq) std::printf(" %d", i);
        std::printf("\n");
      }
    } else {
      Vec from;
      if (!opt_from.empty()) {
        std::stringstream ss(opt_from);
        std::string tok;
        while (std::getline(ss, tok, ',')) from.push_back(std::stod(tok));
      } else if (sc.mission.initial_state) {
        from = *sc.mission.initial_state;
      } else {
        throw validation_error("synth tsp needs --from or routing.initial_state");
      }
      const double rho = opt_rho >= 0 ? opt_rho : sc.mission.rho;
      std::vector<int> active(sc.mission.targets.size());
      for (std::size_t i = 0; i < active.size(); ++i) active[i] = static_cast<int>(i + 1);
      const auto syn = synthesize_tsp_from_state(sys, sc.mission, cov, active, from, rho,
                                                 !opt_norefine, threads);
      save_mission(dir, sc, "tsp", syn, cov, rho, !opt_norefine, &from);
      std::printf("[synth tsp] matrix cost %.3f, rho %.1f%s, %.1fs\n", syn.plan.total_cost, rho,
                  opt_norefine ? ", no refine" : "", sw.secs());
      std::printf("  tour:");
      for (int i : syn.missions[0].tour.seq) std::printf(" %d", i);
      std::printf("\n");
    }
    return 0;
  }

  if (cmd_sim->parsed()) {
    Stopwatch sw;
    const auto sc = load_dir_scenario(sim_dir);
    const auto sys = load_dir_abstraction(sim_dir, sc);
    const auto cov = load_dir_coverage(sim_dir, sc);
    json mission_manifest;
    const auto missions = load_dir_missions(sim_dir, sc, cov, mission_manifest);
    fs::create_directories(sim_dir + "/sim");
    sopt.threads = threads;
    json report;
    report["scenario_hash"] = hash_hex(sc.hash);
    report["algorithm"] = mission_manifest["algorithm"];
    report["seed"] = sopt.seed;
    report["runs"] = sopt.runs;
    report["policy"] = sim_policy;
    std::vector<std::string> traj_files;
    json policies;
    if (sim_policy == "algorithm2" || sim_policy == "both")
      policies["algorithm2"] = simulate_policy(sim_dir, sc, sys, cov, missions, sopt,
                                               TakeoverPolicy::algorithm2, "algorithm2",
                                               traj_files);
    if (sim_policy == "greedy" || sim_policy == "both")
      policies["greedy"] = simulate_policy(sim_dir, sc, sys, cov, missions, sopt,
                                           TakeoverPolicy::greedy, "greedy", traj_files);
    if (policies.empty()) throw validation_error("--policy must be algorithm2, greedy or both");
    report["policies"] = policies;
    report["trajectory_files"] = traj_files;
    write_file(sim_dir + "/sim/report.json", report.dump(2) + "\n");
    for (auto& [name, pol] : policies.items())
      std::printf("[simulate] %-10s complete=%s worst=%.3f mean=%.3f\n", name.c_str(),
                  pol["all_complete"].get<bool>() ? "yes" : "NO",
                  pol["worst_total_cost"].get<double>(), pol["mean_total_cost"].get<double>());
    if (sim_policy == "both") {
      const double a = policies["algorithm2"]["mean_total_cost"].get<double>();
      const double g = policies["greedy"]["mean_total_cost"].get<double>();
      std::printf("[simulate] comparison: algorithm2 %.3f vs greedy %.3f (%s wins)\n", a, g,
                  a <= g ? "algorithm2" : "greedy");
    }
    std::printf("[simulate] %d run(s) in %.1fs -> %s/sim\n", sopt.runs, sw.secs(),
                sim_dir.c_str());
    return 0;
  }

  if (cmd_plot->parsed()) {
    const auto sc = load_dir_scenario(plot_dir);
    std::vector<Trajectory> trajs;
    const auto report_path = plot_dir + "/sim/report.json";
    if (fs::exists(report_path)) {
      const auto report = json::parse(read_file(report_path));
      for (const auto& name : report["trajectory_files"]) {
        std::ifstream f(plot_dir + "/" + name.get<std::string>());
        std::string line;
        std::getline(f, line);  // header
        Trajectory tr;
        while (std::getline(f, line)) {
          TrajectorySample s;
          std::stringstream ss(line);
          std::string tok;
          std::getline(ss, tok, ',');
          s.t = std::stoull(tok);
          for (std::size_t d = 0; d < sc.grid.dim(); ++d) {
            std::getline(ss, tok, ',');
            s.x.push_back(std::stod(tok));
          }
          tr.samples.push_back(std::move(s));
        }
        trajs.push_back(std::move(tr));
      }
    }
    write_mission_svg(plot_out, sc, trajs);
    std::printf("[plot] %zu trajectories -> %s\n", trajs.size(), plot_out.c_str());
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const infeasible_error& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 2;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 4;
  } catch (const validation_error& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 3;
  } catch (const dependency_error& e) {
    std::fprintf(stderr, "dependency error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
