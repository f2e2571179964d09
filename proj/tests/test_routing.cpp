#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "soc/routing.hpp"

using namespace soc;

namespace {

CostMatrix uniform_matrix(std::size_t n, double d = 1.0) {
  CostMatrix C(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (i != j) C.at(static_cast<int>(i), static_cast<int>(j)) = d;
  return C;
}

CostMatrix random_matrix(SplitMix64& rng, std::size_t n, bool exact = true) {
  CostMatrix C(n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (i != j)
        C.at(static_cast<int>(i), static_cast<int>(j)) =
            exact ? static_cast<double>(rng.next_below(512)) / 128.0
                  : rng.next_double() * 7.0;
  return C;
}

}  // namespace

TEST_CASE("three customers with unit distances and capacity 2 cost exactly 5") {
  const auto C = uniform_matrix(4);
  const auto plan = solve_cvrp(C, 2);
  CHECK(plan.certified);
  CHECK(plan.total_cost == 5.0);
  REQUIRE(plan.tours.size() == 2);
  // a 1 + 2 customer split
  std::vector<std::size_t> sizes{plan.tours[0].customers(), plan.tours[1].customers()};
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 2});
  CHECK(plan_feasible(plan, 4, 2));
}

TEST_CASE("asymmetric TSP example picks (1,2,3,1)") {
  CostMatrix C(3);
  C.at(1, 2) = 1;
  C.at(2, 3) = 1;
  C.at(3, 1) = 1;
  C.at(1, 3) = 2;
  C.at(3, 2) = 9;
  C.at(2, 1) = 5;
  const auto plan = solve_cvrp(C, kInfCapacity, 1);
  REQUIRE(plan.tours.size() == 1);
  CHECK(plan.tours[0].seq == std::vector<int>{1, 2, 3, 1});
  CHECK(plan.total_cost == 3.0);
  CHECK(plan.certified);
}

TEST_CASE("capacity 1 forces singleton tours") {
  const auto C = uniform_matrix(3);
  const auto plan = solve_cvrp(C, 1);
  REQUIRE(plan.tours.size() == 2);
  CHECK(plan.tours[0].seq == std::vector<int>{1, 2, 1});
  CHECK(plan.tours[1].seq == std::vector<int>{1, 3, 1});
}

TEST_CASE("single customer degenerates to (1,2,1)") {
  const auto C = uniform_matrix(2, 3.5);
  const auto plan = solve_cvrp(C, 5);
  REQUIRE(plan.tours.size() == 1);
  CHECK(plan.tours[0].seq == std::vector<int>{1, 2, 1});
  CHECK(plan.total_cost == 7.0);
}

TEST_CASE("exact mode equals exhaustive enumeration") {
  SplitMix64 rng(31415);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + rng.next_below(7);  // up to 8 targets
    const int q = 1 + static_cast<int>(rng.next_below(n - 1));
    const auto C = random_matrix(rng, n, inst % 2 == 0);
    std::optional<int> vehicles;
    if (rng.next_below(3) == 0) {
      const int k = static_cast<int>(n) - 1;
      const int lo = (k + q - 1) / q;
      if (lo <= k) vehicles = lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k - lo + 1)));
    }
    const auto plan = solve_cvrp(C, q, vehicles);
    const double ref = oracle::exhaustive_cvrp(C, q, vehicles);
    REQUIRE(plan.certified);
    if (inst % 2 == 0) {
      // costs are multiples of 1/128: sums are exact in any order
      REQUIRE(plan.total_cost == ref);
    } else {
      REQUIRE(plan.total_cost == doctest::Approx(ref).epsilon(1e-12));
    }
    REQUIRE(plan_feasible(plan, n, q, vehicles));
    REQUIRE(plan_cost(C, plan) == plan.total_cost);
  }
}

TEST_CASE("Held-Karp equals brute-force permutations up to n = 9") {
  SplitMix64 rng(2718);
  for (std::size_t n = 3; n <= 9; ++n) {
    for (int inst = 0; inst < 15; ++inst) {
      const auto C = random_matrix(rng, n, true);
      const auto plan = solve_cvrp(C, kInfCapacity, 1);
      const double ref = oracle::exhaustive_tsp(C);
      REQUIRE(plan.certified);
      REQUIRE(plan.tours.size() == 1);
      REQUIRE(plan.total_cost == ref);
      REQUIRE(plan_feasible(plan, n, kInfCapacity, 1));
    }
  }
}

TEST_CASE("heuristic mode stays feasible and never beats the exact optimum") {
  SplitMix64 rng(1618);
  // n = 14 > 12 forces the heuristic; re-check against exhaustive on n <= 8
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 13 + rng.next_below(4);
    const int q = 2 + static_cast<int>(rng.next_below(5));
    const auto C = random_matrix(rng, n, false);
    const auto plan = solve_cvrp(C, q);
    CHECK_FALSE(plan.certified);
    CHECK(plan_feasible(plan, n, q));
    CHECK(plan_cost(C, plan) == doctest::Approx(plan.total_cost));
  }
  for (int inst = 0; inst < 40; ++inst) {
    const std::size_t n = 4 + rng.next_below(5);
    const int q = 2 + static_cast<int>(rng.next_below(3));
    const auto C = random_matrix(rng, n, true);
    const auto exact = solve_cvrp(C, q);
    const double ref = oracle::exhaustive_cvrp(C, q, std::nullopt);
    REQUIRE(exact.total_cost == ref);
  }
}

TEST_CASE("heuristic honours an exact vehicle count") {
  SplitMix64 rng(99);
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t n = 14;
    const int q = 4;
    const auto C = random_matrix(rng, n, false);
    for (int v : {4, 6, 9}) {
      const auto plan = solve_cvrp(C, q, v);
      CHECK(plan_feasible(plan, n, q, v));
    }
  }
}

TEST_CASE("infeasible capacity and vehicle combinations are rejected") {
  const auto C = uniform_matrix(5);
  CHECK_THROWS_AS(solve_cvrp(C, 1, 2), infeasible_error);   // 4 customers, q=1 needs 4 tours
  CHECK_THROWS_AS(solve_cvrp(C, 2, 5), infeasible_error);   // more vehicles than customers
  CHECK_THROWS_AS(solve_cvrp(C, 0, std::nullopt), validation_error);
}

TEST_CASE("plan output is deterministic and canonically ordered") {
  SplitMix64 rng(777);
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 4 + rng.next_below(6);
    const int q = 2 + static_cast<int>(rng.next_below(3));
    const auto C = random_matrix(rng, n, true);
    const auto a = solve_cvrp(C, q);
    const auto b = solve_cvrp(C, q);
    REQUIRE(a.tours.size() == b.tours.size());
    for (std::size_t t = 0; t < a.tours.size(); ++t) REQUIRE(a.tours[t].seq == b.tours[t].seq);
    for (std::size_t t = 1; t < a.tours.size(); ++t)
      REQUIRE(a.tours[t - 1].seq < a.tours[t].seq);
  }
}
