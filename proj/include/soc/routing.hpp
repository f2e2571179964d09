#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "soc/coverage.hpp"

namespace soc {

inline constexpr int kInfCapacity = INT_MAX;

/* weighted adjacency matrix over targets 1..n (1 = depot); diagonal unused
 * and set to infinity */
struct CostMatrix {
  std::size_t n = 0;
  std::vector<double> entries;  // n*n, row-major

  explicit CostMatrix(std::size_t n_targets = 0)
      : n(n_targets), entries(n_targets * n_targets, kInf) {}
  double& at(int i, int j) { return entries[static_cast<std::size_t>(i - 1) * n + (j - 1)]; }
  double at(int i, int j) const { return entries[static_cast<std::size_t>(i - 1) * n + (j - 1)]; }
};

/* depot-to-depot index sequence (1, c_1, ..., c_k, 1) */
struct Tour {
  std::vector<int> seq;
  std::size_t customers() const { return seq.size() >= 2 ? seq.size() - 2 : 0; }
};

struct TourPlan {
  std::vector<Tour> tours;
  double total_cost = 0;
  bool certified = false;  // true when produced by an exact solver
};

/* C[i][j] = min over p in A'_i of V_j(p); finite off the diagonal for any
 * valid coverage solution */
CostMatrix cost_matrix_from_coverage(const CoverageSolution& cov);

/* row 1 replaced by the cost estimates from the concrete initial cell:
 * C[1][j] = V_j(x0). Requires V_1(x0) finite. `active` selects a subset of
 * the coverage targets (1-based, must start with 1); the returned matrix is
 * indexed by position in `active`. */
CostMatrix cost_matrix_from_state(const CoverageSolution& cov, std::uint32_t x0_cell);
CostMatrix cost_matrix_from_state_subset(const CoverageSolution& cov, std::uint32_t x0_cell,
                                         std::span<const int> active);

/* Minimizes the summed adjacency cost over feasible sequences of q-tours.
 * Exact (partition DP with Held-Karp per subset) for n <= 12; single
 * vehicle with unconstrained capacity uses Held-Karp up to n <= 16.
 * Larger instances fall back to savings construction plus 2-opt and
 * inter-tour relocation and are flagged uncertified. The number of tours
 * is free unless num_vehicles is given, in which case it is exact. */
TourPlan solve_cvrp(const CostMatrix& C, int capacity,
                    std::optional<int> num_vehicles = std::nullopt);

/* single-vehicle asymmetric TSP (depot-to-depot Hamiltonian tour) */
TourPlan solve_atsp(const CostMatrix& C);

double plan_cost(const CostMatrix& C, const TourPlan& plan);
/* q-tour and exactly-once feasibility per the problem definition */
bool plan_feasible(const TourPlan& plan, std::size_t n, int capacity,
                   std::optional<int> num_vehicles = std::nullopt);

}  // namespace soc
