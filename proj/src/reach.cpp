#include "soc/reach.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <queue>

#include "soc/errors.hpp"

namespace soc {

TerminalCost TerminalCost::zero(std::vector<std::uint32_t> target_cells) {
  TerminalCost t;
  std::sort(target_cells.begin(), target_cells.end());
  target_cells.erase(std::unique(target_cells.begin(), target_cells.end()), target_cells.end());
  t.g0.assign(target_cells.size(), 0.0);
  t.cells = std::move(target_cells);
  return t;
}

TerminalCost TerminalCost::on_cells(std::vector<std::uint32_t> target_cells,
                                    const ValueFunction& v) {
  TerminalCost t = zero(std::move(target_cells));
  for (std::size_t i = 0; i < t.cells.size(); ++i) t.g0[i] = v(t.cells[i]);
  return t;
}

ReachSolution solve_reach(const AbstractSystem& sys, const TerminalCost& target) {
  const std::uint32_t n = sys.n_cells();
  const std::uint32_t m = sys.n_inputs();
  const TransitionData& td = sys.transitions();

  ReachSolution sol;
  sol.value.values.assign(n, kInf);
  sol.controller.input.assign(n, kNoInput);
  sol.controller.stop.assign(n, 0);
  auto& V = sol.value.values;

  // per pair: successors not yet finalized, and max value among finalized
  std::vector<std::uint32_t> undecided(td.n_pairs());
  for (std::uint64_t p = 0; p < td.n_pairs(); ++p)
    undecided[p] = static_cast<std::uint32_t>(td.succ_offsets[p + 1] - td.succ_offsets[p]);
  std::vector<double> maxval(td.n_pairs(), 0.0);
  std::vector<std::uint8_t> finalized(n, 0);

  using Entry = std::pair<double, std::uint32_t>;  // (value, cell); deterministic order
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

  for (std::size_t i = 0; i < target.cells.size(); ++i) {
    const std::uint32_t c = target.cells[i];
    const double g0 = target.g0[i];
    if (!(g0 >= 0)) throw validation_error("solve_reach: negative terminal cost");
    if (!std::isfinite(g0)) continue;
    if (g0 < V[c]) {
      V[c] = g0;
      sol.controller.input[c] = kNoInput;
      sol.controller.stop[c] = 1;
      heap.emplace(g0, c);
    }
  }

  while (!heap.empty()) {
    const auto [v, c] = heap.top();
    heap.pop();
    if (finalized[c] || v > V[c]) continue;
    finalized[c] = 1;
    const std::uint64_t pb = td.pred_offsets[c], pe = td.pred_offsets[c + 1];
    for (std::uint64_t k = pb; k < pe; ++k) {
      const std::uint32_t p = td.pred_pairs[k];
      if (V[c] > maxval[p]) maxval[p] = V[c];
      if (--undecided[p] != 0) continue;
      const double cand = sys.edge_cost(p) + maxval[p];
      const std::uint32_t src = p / m;
      if (cand < V[src]) {
        // strict improvement only: ties keep the stop action or the
        // earlier-finalized choice, preserving closed-loop progress
        V[src] = cand;
        sol.controller.input[src] = p % m;
        sol.controller.stop[src] = 0;
        heap.emplace(cand, src);
      }
    }
  }
  return sol;
}

AbstractSystem restrict_running_cost(const AbstractSystem& sys, std::span<const Box> target_boxes,
                                     double rho) {
  if (!(rho >= 0)) throw validation_error("restrict_running_cost: rho must be >= 0");
  const Grid& grid = sys.grid();
  const std::size_t nd = grid.dim();
  std::vector<double> costs = sys.edge_costs();
  const std::uint32_t m = sys.n_inputs();
  Vec center(nd);
  for (std::uint32_t c = 0; c < sys.n_cells(); ++c) {
    grid.cell_center(c, center);
    bool close = true;
    for (std::size_t d = 0; d < nd && close; ++d) {
      double dist = kInf;
      for (const auto& b : target_boxes) {
        double dd;
        if (center[d] < b.lower[d])
          dd = b.lower[d] - center[d];
        else if (center[d] > b.upper[d])
          dd = center[d] - b.upper[d];
        else
          dd = 0.0;
        if (grid.periodic(d)) {
          // distance under identification modulo the domain width
          const double w = grid.domain().width(d);
          const double alt1 = std::abs(center[d] + w - std::clamp(center[d] + w, b.lower[d], b.upper[d]));
          const double alt2 = std::abs(center[d] - w - std::clamp(center[d] - w, b.lower[d], b.upper[d]));
          dd = std::min({dd, alt1, alt2});
        }
        dist = std::min(dist, dd);
      }
      if (dist > rho) close = false;
    }
    if (!close)
      for (std::uint32_t u = 0; u < m; ++u) costs[std::uint64_t(c) * m + u] = kInf;
  }
  return sys.with_edge_costs(std::move(costs));
}

namespace {

template <typename T>
void write_pod(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw validation_error("binary read: truncated file");
  return v;
}

void write_grid_header(std::ofstream& f, const char* magic, const Grid& grid) {
  f.write(magic, 6);
  write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(grid.dim()));
  for (auto c : grid.cells_per_dim()) write_pod<std::uint64_t>(f, c);
}

void check_grid_header(std::ifstream& f, const char* magic, const Grid& grid,
                       const std::string& path) {
  char got[6];
  f.read(got, 6);
  if (!f || std::memcmp(got, magic, 6) != 0)
    throw validation_error(path + ": bad magic, expected " + std::string(magic, 6));
  const auto dims = read_pod<std::uint32_t>(f);
  if (dims != grid.dim()) throw validation_error(path + ": dimension mismatch");
  for (std::size_t d = 0; d < dims; ++d)
    if (read_pod<std::uint64_t>(f) != grid.cells_per_dim()[d])
      throw validation_error(path + ": cells_per_dim mismatch");
}

}  // namespace

void ValueFunction::dump(const std::string& path, const Grid& grid) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw validation_error("cannot write " + path);
  write_grid_header(f, "SOCVF1", grid);
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!f) throw validation_error("write failed: " + path);
}

ValueFunction ValueFunction::load(const std::string& path, const Grid& grid) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dependency_error("cannot open " + path);
  check_grid_header(f, "SOCVF1", grid, path);
  ValueFunction v;
  v.values.resize(grid.n_cells());
  f.read(reinterpret_cast<char*>(v.values.data()),
         static_cast<std::streamsize>(v.values.size() * sizeof(double)));
  if (!f) throw validation_error(path + ": truncated value function");
  return v;
}

void MemorylessController::dump(const std::string& path, const Grid& grid) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw validation_error("cannot write " + path);
  write_grid_header(f, "SOCCT1", grid);
  for (std::size_t c = 0; c < input.size(); ++c) {
    write_pod<std::uint32_t>(f, input[c]);
    write_pod<std::uint8_t>(f, stop[c]);
  }
  if (!f) throw validation_error("write failed: " + path);
}

MemorylessController MemorylessController::load(const std::string& path, const Grid& grid) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dependency_error("cannot open " + path);
  check_grid_header(f, "SOCCT1", grid, path);
  MemorylessController ctl;
  const auto n = grid.n_cells();
  ctl.input.resize(n);
  ctl.stop.resize(n);
  for (std::uint64_t c = 0; c < n; ++c) {
    ctl.input[c] = read_pod<std::uint32_t>(f);
    ctl.stop[c] = read_pod<std::uint8_t>(f);
  }
  return ctl;
}

}  // namespace soc
