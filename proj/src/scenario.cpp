#include "soc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace soc {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw validation_error(path + ": " + reason);
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing required field '" + std::string(key) + "'");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::vector<double> as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

Box as_box(const json& j, const std::string& path) {
  Box b;
  b.lower = as_vector(require(j, "lower", path), path + ".lower");
  b.upper = as_vector(require(j, "upper", path), path + ".upper");
  if (b.lower.size() != b.upper.size()) fail(path, "lower/upper lengths differ");
  return b;
}

/* Box over the full state space: entries may be null (unconstrained) and
 * arrays may be shorter than the state dimension; missing coordinates span
 * the whole domain. */
Box as_state_box(const json& j, const Box& domain, const std::string& path) {
  const json& jl = require(j, "lower", path);
  const json& ju = require(j, "upper", path);
  if (!jl.is_array() || !ju.is_array()) fail(path, "lower/upper must be arrays");
  if (jl.size() != ju.size()) fail(path, "lower/upper lengths differ");
  if (jl.size() > domain.dim()) fail(path, "more coordinates than state dimensions");
  Box b = domain;
  for (std::size_t d = 0; d < jl.size(); ++d) {
    if (jl[d].is_null() != ju[d].is_null()) fail(path, "null must pair in lower/upper");
    if (jl[d].is_null()) continue;
    b.lower[d] = as_number(jl[d], path + ".lower[" + std::to_string(d) + "]");
    b.upper[d] = as_number(ju[d], path + ".upper[" + std::to_string(d) + "]");
  }
  return b;
}

void check_within_domain(const Box& b, const Grid& grid, const std::string& path) {
  for (std::size_t d = 0; d < grid.dim(); ++d) {
    if (grid.periodic(d)) continue;
    if (b.lower[d] < grid.domain().lower[d] - 1e-12 ||
        b.upper[d] > grid.domain().upper[d] + 1e-12)
      fail(path, "box leaves the grid domain in dimension " + std::to_string(d));
  }
}

/* heading interval possibly crossing the 0/2pi seam -> one or two plain
 * intervals inside [0,2pi) */
std::vector<std::pair<double, double>> normalize_heading(double lo, double hi,
                                                         const std::string& path) {
  const double width = hi - lo;
  if (!(width > 0) || width > kTwoPi + 1e-12) fail(path, "heading interval must have width in (0, 2pi]");
  if (width >= kTwoPi - 1e-12) return {{0.0, kTwoPi}};
  double a = std::fmod(lo, kTwoPi);
  if (a < 0) a += kTwoPi;
  const double b = a + width;
  if (b <= kTwoPi) return {{a, b}};
  return {{a, kTwoPi}, {0.0, b - kTwoPi}};
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line for a readable message
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw validation_error(origin + ":" + std::to_string(line) + ": " + e.what());
  }

  Scenario sc;
  sc.raw = text;
  sc.hash = fnv1a64(text);
  sc.name = doc.value("name", std::string("scenario"));

  // ---- dynamics block
  const json& jd = require(doc, "dynamics", origin);
  SampledDynamics& dyn = sc.dynamics;
  dyn.model = model_from_name(require(jd, "model", origin + ".dynamics").get<std::string>());
  dyn.tau = as_number(require(jd, "tau", origin + ".dynamics"), origin + ".dynamics.tau");
  dyn.input_bounds = as_box(require(jd, "input_bounds", origin + ".dynamics"),
                            origin + ".dynamics.input_bounds");
  if (jd.contains("substeps")) dyn.substeps = jd["substeps"].get<int>();

  // ---- grid block
  const json& jg = require(doc, "grid", origin);
  Box domain = as_box(require(jg, "domain", origin + ".grid"), origin + ".grid.domain");
  const json& jc = require(jg, "cells_per_dim", origin + ".grid");
  std::vector<std::uint64_t> cells;
  for (const auto& c : jc) cells.push_back(c.get<std::uint64_t>());
  std::vector<bool> periodic;
  if (jg.contains("periodic"))
    for (const auto& p : jg["periodic"]) periodic.push_back(p.get<bool>());
  sc.grid = Grid(domain, cells, periodic);

  dyn.state_dim = model_state_dim(dyn.model, sc.grid.dim());
  dyn.input_dim = model_input_dim(dyn.model, sc.grid.dim());
  if (sc.grid.dim() != dyn.state_dim)
    fail(origin + ".grid", "grid dimension " + std::to_string(sc.grid.dim()) +
                               " does not match the model state dimension " +
                               std::to_string(dyn.state_dim));
  if (auto ad = model_angle_dim(dyn.model)) {
    if (!sc.grid.periodic(*ad))
      fail(origin + ".grid.periodic", "heading dimension " + std::to_string(*ad) +
                                          " must be periodic for this model");
    if (std::abs(sc.grid.domain().lower[*ad]) > 1e-9 ||
        std::abs(sc.grid.domain().upper[*ad] - kTwoPi) > 1e-6)
      fail(origin + ".grid.domain", "heading dimension must span [0, 2pi)");
  }

  dyn.disturbance = as_box(require(jd, "disturbance", origin + ".dynamics"),
                           origin + ".dynamics.disturbance");
  if (jd.contains("jacobian_bound")) {
    for (const auto& row : jd["jacobian_bound"])
      dyn.jacobian_bound.push_back(as_vector(row, origin + ".dynamics.jacobian_bound"));
    dyn.per_input_growth = false;  // an explicit bound is used as given
  } else {
    double speed_max = 0;
    if (dyn.model == VehicleModel::bicycle)
      speed_max = std::max(std::abs(sc.grid.domain().lower[3]), std::abs(sc.grid.domain().upper[3]));
    dyn.jacobian_bound = default_jacobian_bound(dyn.model, dyn.input_bounds, speed_max, sc.grid.dim());
  }
  dyn.validate();

  const json& jiv = require(jd, "input_values_per_dim", origin + ".dynamics");
  std::vector<std::uint32_t> ivals;
  for (const auto& v : jiv) ivals.push_back(v.get<std::uint32_t>());
  sc.inputs = InputSet::uniform(dyn.input_bounds, ivals);

  // ---- cost block
  const json& jcost = require(doc, "cost", origin);
  RunningCostSpec& cost = sc.cost;
  cost.tau = dyn.tau;
  const std::string style = require(jcost, "style", origin + ".cost").get<std::string>();
  if (style == "time_turn") {
    cost.lane_term = false;
  } else if (style == "time_turn_lane") {
    cost.lane_term = true;
  } else {
    fail(origin + ".cost.style", "unknown style '" + style + "'");
  }
  cost.turn_weight = jcost.value("turn_weight", 1.0);
  cost.turn_input = 1;
  if (jcost.contains("lanes")) {
    for (std::size_t i = 0; i < jcost["lanes"].size(); ++i) {
      const auto seg = as_vector(jcost["lanes"][i], origin + ".cost.lanes[" + std::to_string(i) + "]");
      if (seg.size() != 4)
        fail(origin + ".cost.lanes[" + std::to_string(i) + "]", "expected [x1,y1,x2,y2]");
      cost.lanes.push_back({seg[0], seg[1], seg[2], seg[3]});
    }
  }
  if (cost.lane_term && cost.lanes.empty())
    fail(origin + ".cost", "style time_turn_lane requires a nonempty 'lanes' list");

  const auto angle_dim = model_angle_dim(dyn.model);
  if (jcost.contains("obstacles")) {
    for (std::size_t i = 0; i < jcost["obstacles"].size(); ++i) {
      const std::string path = origin + ".cost.obstacles[" + std::to_string(i) + "]";
      Box b = as_state_box(jcost["obstacles"][i], sc.grid.domain(), path);
      check_within_domain(b, sc.grid, path);
      cost.blocked.push_back(b);
      if (sc.grid.dim() >= 2)
        sc.obstacles_plot.push_back(Box({b.lower[0], b.lower[1]}, {b.upper[0], b.upper[1]}));
    }
  }
  if (jcost.contains("nofly")) {
    if (!angle_dim) fail(origin + ".cost.nofly", "model has no heading dimension");
    for (std::size_t i = 0; i < jcost["nofly"].size(); ++i) {
      const std::string path = origin + ".cost.nofly[" + std::to_string(i) + "]";
      const json& e = jcost["nofly"][i];
      Box base = as_state_box(e, sc.grid.domain(), path);
      check_within_domain(base, sc.grid, path);
      const auto hd = as_vector(require(e, "heading", path), path + ".heading");
      if (hd.size() != 2) fail(path + ".heading", "expected [lo, hi]");
      for (const auto& [a, b] : normalize_heading(hd[0], hd[1], path + ".heading")) {
        Box blocked = base;
        blocked.lower[*angle_dim] = a;
        blocked.upper[*angle_dim] = b;
        cost.blocked.push_back(blocked);
      }
      sc.nofly_plot.push_back(Box({base.lower[0], base.lower[1]}, {base.upper[0], base.upper[1]}));
    }
  }
  if (jcost.contains("speed_limits")) {
    if (dyn.model != VehicleModel::bicycle)
      fail(origin + ".cost.speed_limits", "speed limits need a model with a velocity dimension");
    for (std::size_t i = 0; i < jcost["speed_limits"].size(); ++i) {
      const std::string path = origin + ".cost.speed_limits[" + std::to_string(i) + "]";
      const json& e = jcost["speed_limits"][i];
      Box base = as_state_box(e, sc.grid.domain(), path);
      check_within_domain(base, sc.grid, path);
      const auto hd = as_vector(require(e, "heading", path), path + ".heading");
      if (hd.size() != 2) fail(path + ".heading", "expected [lo, hi]");
      const double vmax = as_number(require(e, "max_speed", path), path + ".max_speed");
      if (vmax >= sc.grid.domain().upper[3]) fail(path, "max_speed at or above the domain bound");
      for (const auto& [a, b] : normalize_heading(hd[0], hd[1], path + ".heading")) {
        Box blocked = base;
        blocked.lower[*angle_dim] = a;
        blocked.upper[*angle_dim] = b;
        blocked.lower[3] = vmax;
        blocked.upper[3] = sc.grid.domain().upper[3];
        cost.blocked.push_back(blocked);
      }
    }
  }

  // ---- targets block
  const json& jt = require(doc, "targets", origin);
  if (!jt.is_array() || jt.size() < 2)
    fail(origin + ".targets", "need the depot plus at least one customer target");
  for (std::size_t i = 0; i < jt.size(); ++i) {
    const std::string path = origin + ".targets[" + std::to_string(i) + "]";
    Box b = as_state_box(jt[i], sc.grid.domain(), path);
    b.validate(path);
    check_within_domain(b, sc.grid, path);
    if (cells_inside(sc.grid, b).empty())
      fail(path, "target " + std::to_string(i + 1) + " contains no grid cell");
    sc.mission.targets.push_back(std::move(b));
  }

  // ---- routing block
  if (doc.contains("routing")) {
    const json& jr = doc["routing"];
    if (jr.contains("capacity")) {
      if (jr["capacity"].is_string()) {
        if (jr["capacity"].get<std::string>() != "inf")
          fail(origin + ".routing.capacity", "expected an integer or \"inf\"");
        sc.mission.capacity = kInfCapacity;
      } else {
        sc.mission.capacity = jr["capacity"].get<int>();
      }
    }
    if (jr.contains("num_vehicles")) sc.mission.num_vehicles = jr["num_vehicles"].get<int>();
    if (jr.contains("rho")) sc.mission.rho = as_number(jr["rho"], origin + ".routing.rho");
    if (jr.contains("initial_state")) {
      sc.mission.initial_state = as_vector(jr["initial_state"], origin + ".routing.initial_state");
      if (sc.mission.initial_state->size() != sc.grid.dim())
        fail(origin + ".routing.initial_state", "dimension mismatch with the state space");
      try {
        sc.grid.quantize(*sc.mission.initial_state);
      } catch (const domain_error& e) {
        fail(origin + ".routing.initial_state", e.what());
      }
    }
  }
  sc.mission.validate(sc.grid);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw validation_error("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace soc
