#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soc/abstraction.hpp"

namespace soc {

inline constexpr std::uint32_t kNoInput = 0xFFFFFFFFu;

/* worst-case optimal cost-to-go per cell; +inf where the target cannot be
 * forcibly reached */
struct ValueFunction {
  std::vector<double> values;

  double operator()(std::uint32_t cell) const { return values[cell]; }
  std::size_t size() const { return values.size(); }

  void dump(const std::string& path, const Grid& grid) const;  // "SOCVF1"
  static ValueFunction load(const std::string& path, const Grid& grid);
};

/* cell feedback: an input index plus a stopping flag; defined exactly on
 * cells with finite value. Stop actions carry no input. */
struct MemorylessController {
  std::vector<std::uint32_t> input;  // kNoInput when stop or undefined
  std::vector<std::uint8_t> stop;

  bool defined(std::uint32_t cell) const {
    return stop[cell] != 0 || input[cell] != kNoInput;
  }
  std::size_t size() const { return input.size(); }

  void dump(const std::string& path, const Grid& grid) const;  // "SOCCT1"
  static MemorylessController load(const std::string& path, const Grid& grid);
};

/* terminal cost G0 on the target cell set A; infinite off A */
struct TerminalCost {
  std::vector<std::uint32_t> cells;  // sorted unique
  std::vector<double> g0;            // parallel to cells, finite, >= 0

  static TerminalCost zero(std::vector<std::uint32_t> target_cells);
  static TerminalCost on_cells(std::vector<std::uint32_t> target_cells,
                               const ValueFunction& v);  // G0 = v on the cells
};

struct ReachSolution {
  ValueFunction value;
  MemorylessController controller;
};

/* Optimal solution of the quantitative reach-avoid problem on the
 * abstraction: V is the fixed point of
 *   V(c) = min( G0(c) for c in A,
 *               min over u of  edge_cost(c,u) + max over F(c,u) of V )
 * reached from above, computed by label-setting over the min-max semiring
 * (valid for nonnegative edge costs). The controller records the choice at
 * finalization time, so following it strictly decreases the finalization
 * rank and the closed loop stops after finitely many steps even on
 * zero-cost cycles. Stopping is preferred over continuing on exact ties. */
ReachSolution solve_reach(const AbstractSystem& sys, const TerminalCost& target);

/* Copy of sys whose running cost is infinite on every cell whose center
 * violates the per-coordinate rho-closeness condition to the target boxes:
 * kept iff for every coordinate j, min over boxes of
 * dist(center_j, proj_j(box)) <= rho. */
AbstractSystem restrict_running_cost(const AbstractSystem& sys, std::span<const Box> target_boxes,
                                     double rho);

}  // namespace soc
