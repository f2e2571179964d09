#include <fstream>
#include <sstream>

#include "doctest.h"
#include "soc/scenario.hpp"
#include "soc/svg.hpp"

using namespace soc;

#ifndef SOC_SCENARIO_DIR
#define SOC_SCENARIO_DIR "scenarios"
#endif

TEST_CASE("plot with no trajectories emits the static layers only") {
  const auto sc = load_scenario(std::string(SOC_SCENARIO_DIR) + "/uav_two_small.json");
  write_mission_svg("test_plot_empty.svg", sc, {});
  std::ifstream f("test_plot_empty.svg");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string svg = ss.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<rect") != std::string::npos);      // domain, obstacles, targets
  CHECK(svg.find("<polyline") == std::string::npos);  // no trajectories
  // every target is drawn and labelled
  CHECK(svg.find(">A1<") != std::string::npos);
  CHECK(svg.find(">A5<") != std::string::npos);
  std::remove("test_plot_empty.svg");
}

TEST_CASE("plot with a trajectory draws one polyline per vehicle") {
  const auto sc = load_scenario(std::string(SOC_SCENARIO_DIR) + "/uav_two_small.json");
  Trajectory tr;
  tr.samples.push_back({0, Vec{100, 100, 0}, Vec{10, 0}, 0, 1, 2, 0.0});
  tr.samples.push_back({1, Vec{140, 120, 0.2}, Vec{10, 0}, 0, 1, 2, 0.9});
  write_mission_svg("test_plot_traj.svg", sc, {tr, tr});
  std::ifstream f("test_plot_traj.svg");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string svg = ss.str();
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 2);
  std::remove("test_plot_traj.svg");
}
