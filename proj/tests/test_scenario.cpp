#include <cmath>
#include <fstream>

#include "doctest.h"
#include "soc/scenario.hpp"

using namespace soc;

#ifndef SOC_SCENARIO_DIR
#define SOC_SCENARIO_DIR "scenarios"
#endif

namespace {
const std::string kDir = SOC_SCENARIO_DIR;
}

TEST_CASE("truck_small parses with nine targets and the bicycle model") {
  const auto sc = load_scenario(kDir + "/truck_small.json");
  CHECK(sc.name == "truck_small");
  CHECK(sc.dynamics.model == VehicleModel::bicycle);
  CHECK(sc.mission.targets.size() == 9);
  CHECK(sc.grid.dim() == 4);
  CHECK(sc.cost.lane_term);
  CHECK(!sc.cost.lanes.empty());
  // speed-limit region became blocked boxes over heading and speed
  bool has_speed_block = false;
  for (const auto& b : sc.cost.blocked)
    if (b.upper[3] == sc.grid.domain().upper[3] && b.lower[3] == 8.0) has_speed_block = true;
  CHECK(has_speed_block);
  // the wrapped I_east heading split into two boxes
  int speed_pieces = 0;
  for (const auto& b : sc.cost.blocked)
    if (b.lower[3] == 8.0) ++speed_pieces;
  CHECK(speed_pieces == 2);
  // target 6 carries the velocity constraint and spans all headings
  const Box& a6 = sc.mission.targets[5];
  CHECK(a6.lower[0] == 62.0);
  CHECK(a6.upper[1] == 36.0);
  CHECK(a6.lower[2] == sc.grid.domain().lower[2]);
  CHECK(a6.upper[2] == sc.grid.domain().upper[2]);
  CHECK(a6.upper[3] == 4.0);
}

TEST_CASE("uav_two parses with dubins model and tau 0.65") {
  const auto sc = load_scenario(kDir + "/uav_two.json");
  CHECK(sc.dynamics.model == VehicleModel::dubins);
  CHECK(sc.dynamics.tau == 0.65);
  CHECK(sc.mission.targets.size() == 8);
  CHECK(sc.inputs.size() == 15);
  CHECK(sc.mission.capacity == kInfCapacity);
  CHECK(sc.mission.num_vehicles == 2);
}

TEST_CASE("uav_two_small parses and matches the desk-scale grid") {
  const auto sc = load_scenario(kDir + "/uav_two_small.json");
  CHECK(sc.grid.cells_per_dim() == std::vector<std::uint64_t>{60, 50, 16});
  CHECK(sc.mission.targets.size() == 5);
  CHECK(sc.mission.rho == 180.0);
  REQUIRE(sc.mission.initial_state.has_value());
  CHECK(sc.grid.quantize(*sc.mission.initial_state) > 0);
  // default jacobian bound was derived from the input box
  CHECK(sc.dynamics.jacobian_bound[0][2] == 50.0);
  CHECK(sc.dynamics.per_input_growth);
}

TEST_CASE("validation: target outside the domain is named") {
  const auto sc_text = R"({
    "name": "bad",
    "dynamics": {
      "model": "dubins", "tau": 0.5,
      "input_bounds": {"lower": [10, -0.5], "upper": [50, 0.5]},
      "input_values_per_dim": [2, 3],
      "disturbance": {"lower": [0,0,0], "upper": [0,0,0]}
    },
    "grid": {
      "domain": {"lower": [0,0,0], "upper": [100,100,6.283185307179586]},
      "cells_per_dim": [10,10,8],
      "periodic": [false,false,true]
    },
    "cost": {"style": "time_turn"},
    "targets": [
      {"lower": [0,0], "upper": [20,20]},
      {"lower": [90,90], "upper": [120,99]}
    ]
  })";
  try {
    parse_scenario(sc_text, "bad.json");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("targets[1]") != std::string::npos);
  }
}

TEST_CASE("validation: parse errors carry a line number") {
  try {
    parse_scenario("{\n  \"name\": \"x\",\n  broken\n}", "broken.json");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("broken.json:3") != std::string::npos);
  }
}

TEST_CASE("validation: missing fields and bad models are reported") {
  CHECK_THROWS_AS(parse_scenario("{}", "x.json"), validation_error);
  const auto no_model = R"({"dynamics": {"tau": 1}, "grid": {}, "cost": {}, "targets": []})";
  CHECK_THROWS_AS(parse_scenario(no_model, "x.json"), validation_error);
}

TEST_CASE("scenario hash is stable and content addressed") {
  std::ifstream f(kDir + "/uav_two_small.json", std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const auto sc = parse_scenario(text, "uav_two_small.json");
  CHECK(sc.hash == fnv1a64(text));
  CHECK(sc.hash != fnv1a64(text + " "));
}
