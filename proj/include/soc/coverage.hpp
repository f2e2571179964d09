#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "soc/reach.hpp"

namespace soc {

/* Per-target optimal reach solutions with mutually consistent shrunken
 * targets: V_i finite on the union of all A'_j, A'_i a nonempty subset of
 * the cells of A_i. */
struct CoverageSolution {
  struct Entry {
    ValueFunction value;
    std::vector<std::uint32_t> target_cells;  // A'_i, sorted
    MemorylessController controller;
  };
  std::vector<Entry> targets;  // position i holds target index i+1 (1 = depot)
  int reach_solves = 0;

  std::size_t n_targets() const { return targets.size(); }
};

struct CoverageOutcome {
  bool ok = false;
  CoverageSolution solution;   // valid when ok
  int empty_target = 0;        // 1-based index of the target that shrank to empty
  int reach_solves = 0;

  explicit operator bool() const { return ok; }
};

/* Queue discipline hook: picks the position of the next index to pop from
 * the pending queue (front = FIFO, the default). Used by tests to probe
 * order independence of the fixed point. */
using QueuePick = std::function<std::size_t(const std::vector<int>& queue)>;

/* Fixed-point iteration over per-target reach solves: solve target i on the
 * current A'_i with G0 = 0, remove from every other A'_j the cells where
 * V_i is infinite, re-enqueue what shrank, repeat until stable. Fails when
 * some A'_j becomes empty. Queue entries pending at a phase boundary are
 * solved concurrently when threads > 1; shrinking is applied sequentially
 * in batch order, which yields the same result as the sequential loop. */
CoverageOutcome solve_coverage(const AbstractSystem& sys,
                               std::vector<std::vector<std::uint32_t>> targets, int threads = 1,
                               const QueuePick& pick = nullptr);

}  // namespace soc
