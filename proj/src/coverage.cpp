#include "soc/coverage.hpp"

#include <algorithm>
#include <cmath>

#include "soc/errors.hpp"
#include "soc/parallel.hpp"

namespace soc {

CoverageOutcome solve_coverage(const AbstractSystem& sys,
                               std::vector<std::vector<std::uint32_t>> targets, int threads,
                               const QueuePick& pick) {
  const std::size_t N = targets.size();
  if (N == 0) throw validation_error("solve_coverage: no targets");
  for (std::size_t i = 0; i < N; ++i) {
    auto& t = targets[i];
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    if (t.empty())
      throw validation_error("solve_coverage: target " + std::to_string(i + 1) +
                             " has no cells on the grid");
    if (t.back() >= sys.n_cells())
      throw validation_error("solve_coverage: target cell out of range");
  }

  CoverageOutcome out;
  out.solution.targets.resize(N);
  auto& aprime = targets;  // shrinks in place

  std::vector<int> queue;
  std::vector<std::uint8_t> queued(N, 1);
  for (std::size_t i = 0; i < N; ++i) queue.push_back(static_cast<int>(i));

  std::vector<ReachSolution> batch_sol;
  while (!queue.empty()) {
    std::vector<int> batch;
    if (pick) {
      const std::size_t pos = pick(queue);
      batch.push_back(queue[pos]);
      queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      batch.swap(queue);
    }
    for (int i : batch) queued[static_cast<std::size_t>(i)] = 0;

    batch_sol.assign(batch.size(), ReachSolution{});
    parallel_for(batch.size(), threads, [&](std::uint64_t b, std::uint64_t e) {
      for (std::uint64_t k = b; k < e; ++k) {
        const auto i = static_cast<std::size_t>(batch[k]);
        batch_sol[k] = solve_reach(sys, TerminalCost::zero(aprime[i]));
      }
    });
    out.reach_solves += static_cast<int>(batch.size());

    for (std::size_t k = 0; k < batch.size(); ++k) {
      const auto i = static_cast<std::size_t>(batch[k]);
      auto& entry = out.solution.targets[i];
      entry.value = std::move(batch_sol[k].value);
      entry.controller = std::move(batch_sol[k].controller);
      for (std::size_t j = 0; j < N; ++j) {
        if (j == i) continue;
        std::vector<std::uint32_t> kept;
        kept.reserve(aprime[j].size());
        for (auto c : aprime[j])
          if (std::isfinite(entry.value(c))) kept.push_back(c);
        if (kept.empty()) {
          out.ok = false;
          out.empty_target = static_cast<int>(j + 1);
          out.solution.targets.clear();
          return out;
        }
        if (kept.size() != aprime[j].size()) {
          aprime[j] = std::move(kept);
          if (!queued[j]) {
            queued[j] = 1;
            queue.push_back(static_cast<int>(j));
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < N; ++i) out.solution.targets[i].target_cells = std::move(aprime[i]);
  out.solution.reach_solves = out.reach_solves;
  out.ok = true;
  return out;
}

}  // namespace soc
