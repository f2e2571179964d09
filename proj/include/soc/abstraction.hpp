#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "soc/cost.hpp"
#include "soc/dynamics.hpp"
#include "soc/grid.hpp"

namespace soc {

/* Successor lists in CSR form plus the reverse index used by the reach
 * solver. Immutable once built; shared between cost variants of the same
 * abstraction. Pair id = cell * n_inputs + input. */
struct TransitionData {
  std::uint32_t n_cells = 0;
  std::uint32_t n_inputs = 0;
  std::vector<std::uint64_t> succ_offsets;  // n_pairs + 1
  std::vector<std::uint32_t> succ;
  std::vector<std::uint64_t> pred_offsets;  // n_cells + 1
  std::vector<std::uint32_t> pred_pairs;    // pair ids, grouped by successor cell

  std::uint64_t n_pairs() const { return std::uint64_t(n_cells) * n_inputs; }
  std::span<const std::uint32_t> successors(std::uint64_t pair) const {
    return {succ.data() + succ_offsets[pair],
            static_cast<std::size_t>(succ_offsets[pair + 1] - succ_offsets[pair])};
  }
  /* builds pred_offsets/pred_pairs from the successor lists */
  void build_reverse_index();
};

/* Finite over-approximating transition system (X', U', F') together with
 * the per-transition worst-case running cost. Every (cell,input) pair has
 * at least one successor; pairs whose attainable tube leaves the domain in
 * a non-periodic dimension carry a self-loop and cost infinity. */
class AbstractSystem {
 public:
  AbstractSystem() = default;
  AbstractSystem(Grid grid, InputSet inputs, std::shared_ptr<const TransitionData> trans,
                 std::vector<double> edge_cost);

  const Grid& grid() const { return grid_; }
  const InputSet& inputs() const { return inputs_; }
  std::uint32_t n_cells() const { return trans_->n_cells; }
  std::uint32_t n_inputs() const { return trans_->n_inputs; }
  const TransitionData& transitions() const { return *trans_; }

  std::uint64_t pair_id(std::uint32_t cell, std::uint32_t input) const {
    return std::uint64_t(cell) * trans_->n_inputs + input;
  }
  std::span<const std::uint32_t> successors(std::uint32_t cell, std::uint32_t input) const {
    return trans_->successors(pair_id(cell, input));
  }
  double edge_cost(std::uint64_t pair) const { return edge_cost_[pair]; }
  double edge_cost(std::uint32_t cell, std::uint32_t input) const {
    return edge_cost_[pair_id(cell, input)];
  }
  const std::vector<double>& edge_costs() const { return edge_cost_; }

  /* same transitions, different running cost (shares transition data) */
  AbstractSystem with_edge_costs(std::vector<double> costs) const;

  /* direct construction, used by tests and random instances */
  static AbstractSystem from_lists(Grid grid, InputSet inputs,
                                   const std::vector<std::vector<std::vector<std::uint32_t>>>& succ,
                                   const std::vector<std::vector<double>>& cost);

  void dump(const std::string& path) const;                // "SOCAB1"
  static AbstractSystem load(const std::string& path, Grid grid, InputSet inputs);

 private:
  Grid grid_;
  InputSet inputs_;
  std::shared_ptr<const TransitionData> trans_;
  std::vector<double> edge_cost_;
};

/* Builds the abstraction: for each (cell,input) the cell center is
 * propagated by the nominal flow, the cell radius by the growth bound, and
 * every cell meeting the inflated attainable box on positive measure is a
 * successor. The cost is infinite when the source cell or the inflated
 * successor box meets a blocked region, or when the tube leaves the domain
 * in a non-periodic dimension; otherwise the finite running cost evaluated
 * at the source center and nominal successor center. */
AbstractSystem build_abstraction(const SampledDynamics& dyn, const Grid& grid,
                                 const InputSet& inputs, const RunningCostSpec& cost,
                                 int threads = 1);

}  // namespace soc
