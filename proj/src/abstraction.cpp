#include "soc/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "soc/errors.hpp"
#include "soc/parallel.hpp"

namespace soc {

void TransitionData::build_reverse_index() {
  const std::uint64_t np = n_pairs();
  pred_offsets.assign(n_cells + 1, 0);
  for (std::uint64_t p = 0; p < np; ++p)
    for (auto s : successors(p)) ++pred_offsets[s + 1];
  for (std::uint32_t c = 0; c < n_cells; ++c) pred_offsets[c + 1] += pred_offsets[c];
  pred_pairs.resize(succ.size());
  std::vector<std::uint64_t> fill(pred_offsets.begin(), pred_offsets.end() - 1);
  for (std::uint64_t p = 0; p < np; ++p)
    for (auto s : successors(p)) pred_pairs[fill[s]++] = static_cast<std::uint32_t>(p);
}

AbstractSystem::AbstractSystem(Grid grid, InputSet inputs,
                               std::shared_ptr<const TransitionData> trans,
                               std::vector<double> edge_cost)
    : grid_(std::move(grid)),
      inputs_(std::move(inputs)),
      trans_(std::move(trans)),
      edge_cost_(std::move(edge_cost)) {
  if (edge_cost_.size() != trans_->n_pairs())
    throw validation_error("abstract system: edge cost size mismatch");
}

AbstractSystem AbstractSystem::with_edge_costs(std::vector<double> costs) const {
  return AbstractSystem(grid_, inputs_, trans_, std::move(costs));
}

AbstractSystem AbstractSystem::from_lists(
    Grid grid, InputSet inputs, const std::vector<std::vector<std::vector<std::uint32_t>>>& succ,
    const std::vector<std::vector<double>>& cost) {
  auto td = std::make_shared<TransitionData>();
  td->n_cells = static_cast<std::uint32_t>(succ.size());
  td->n_inputs = succ.empty() ? 0 : static_cast<std::uint32_t>(succ[0].size());
  td->succ_offsets.reserve(td->n_pairs() + 1);
  td->succ_offsets.push_back(0);
  std::vector<double> costs;
  costs.reserve(td->n_pairs());
  for (std::uint32_t c = 0; c < td->n_cells; ++c) {
    for (std::uint32_t u = 0; u < td->n_inputs; ++u) {
      const auto& list = succ[c][u];
      if (list.empty()) throw validation_error("abstract system: empty successor list");
      td->succ.insert(td->succ.end(), list.begin(), list.end());
      td->succ_offsets.push_back(td->succ.size());
      costs.push_back(cost[c][u]);
    }
  }
  td->build_reverse_index();
  return AbstractSystem(std::move(grid), std::move(inputs), std::move(td), std::move(costs));
}

AbstractSystem build_abstraction(const SampledDynamics& dyn, const Grid& grid,
                                 const InputSet& inputs, const RunningCostSpec& cost,
                                 int threads) {
  dyn.validate();
  if (grid.dim() != dyn.state_dim)
    throw validation_error("build_abstraction: grid/state dimension mismatch");
  if (inputs.bounds.dim() != dyn.input_dim)
    throw validation_error("build_abstraction: input dimension mismatch");
  if (grid.n_cells() > 0xFFFFFFFFull)
    throw validation_error("build_abstraction: more than 2^32 cells");
  const auto n = static_cast<std::uint32_t>(grid.n_cells());
  const std::uint32_t m = inputs.size();
  if (std::uint64_t(n) * m > 0xFFFFFFFFull)
    throw validation_error("build_abstraction: more than 2^32 (cell,input) pairs");
  const std::size_t nd = grid.dim();

  // growth radius from half cell widths, tightened per input
  Vec r0(nd);
  for (std::size_t d = 0; d < nd; ++d) r0[d] = 0.5 * grid.width(d);
  std::vector<Vec> radius(m);
  for (std::uint32_t u = 0; u < m; ++u)
    radius[u] = growth_radius_for_input(dyn, r0, dyn.tau, inputs.values[u]);

  struct PairResult {
    std::vector<std::uint32_t> succ;
    double cost;
  };
  std::vector<PairResult> pairs(std::uint64_t(n) * m);
  const Vec zero_w(nd, 0.0);

  parallel_for(n, threads, [&](std::uint64_t cb, std::uint64_t ce) {
    Vec x(nd), y(nd);
    Box att;
    att.lower.resize(nd);
    att.upper.resize(nd);
    for (std::uint64_t c = cb; c < ce; ++c) {
      grid.cell_center(c, x);
      const Box src = grid.cell_box(c);
      const bool src_blocked = cost.blocked_box(src);
      for (std::uint32_t u = 0; u < m; ++u) {
        PairResult& out = pairs[c * m + u];
        step(dyn, x, inputs.values[u], zero_w, y);
        bool escaped = false;
        for (std::size_t d = 0; d < nd; ++d) {
          att.lower[d] = y[d] - radius[u][d];
          att.upper[d] = y[d] + radius[u][d];
          // overhang below 1e-9 cell widths is rounding noise, not escape
          const double tol = 1e-9 * grid.width(d);
          if (!grid.periodic(d) && (att.lower[d] < grid.domain().lower[d] - tol ||
                                    att.upper[d] > grid.domain().upper[d] + tol))
            escaped = true;
        }
        if (escaped) {
          out.succ.assign(1, static_cast<std::uint32_t>(c));
          out.cost = kInf;
          continue;
        }
        auto succ64 = cells_overlapping(grid, att);
        out.succ.assign(succ64.begin(), succ64.end());
        if (src_blocked || cost.blocked_box(att)) {
          out.cost = kInf;
        } else {
          out.cost = cost.finite_part(y, inputs.values[u]);
        }
      }
    }
  });

  auto td = std::make_shared<TransitionData>();
  td->n_cells = n;
  td->n_inputs = m;
  std::uint64_t total = 0;
  for (const auto& p : pairs) total += p.succ.size();
  td->succ_offsets.reserve(td->n_pairs() + 1);
  td->succ.reserve(total);
  std::vector<double> costs;
  costs.reserve(td->n_pairs());
  td->succ_offsets.push_back(0);
  for (auto& p : pairs) {
    td->succ.insert(td->succ.end(), p.succ.begin(), p.succ.end());
    td->succ_offsets.push_back(td->succ.size());
    costs.push_back(p.cost);
    p.succ.clear();
    p.succ.shrink_to_fit();
  }
  td->build_reverse_index();
  return AbstractSystem(grid, inputs, std::move(td), std::move(costs));
}

namespace {

void write_bytes(std::ofstream& f, const void* p, std::size_t n) {
  f.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ofstream& f, T v) {
  write_bytes(f, &v, sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw validation_error("binary read: truncated file");
  return v;
}

}  // namespace

void AbstractSystem::dump(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw validation_error("cannot write " + path);
  f.write("SOCAB1", 6);
  write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(grid_.dim()));
  for (auto c : grid_.cells_per_dim()) write_pod<std::uint64_t>(f, c);
  write_pod<std::uint32_t>(f, n_inputs());
  const std::uint64_t np = trans_->n_pairs();
  for (std::uint64_t p = 0; p < np; ++p) {
    const auto s = trans_->successors(p);
    write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(s.size()));
    for (auto id : s) write_pod<std::uint64_t>(f, id);
    write_pod<double>(f, edge_cost_[p]);
  }
  if (!f) throw validation_error("write failed: " + path);
}

AbstractSystem AbstractSystem::load(const std::string& path, Grid grid, InputSet inputs) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dependency_error("cannot open " + path + " (run 'abstract' first)");
  char magic[6];
  f.read(magic, 6);
  if (!f || std::memcmp(magic, "SOCAB1", 6) != 0)
    throw validation_error(path + ": bad magic, not an abstraction dump");
  const auto dims = read_pod<std::uint32_t>(f);
  if (dims != grid.dim()) throw validation_error(path + ": dimension mismatch with scenario grid");
  for (std::size_t d = 0; d < dims; ++d) {
    const auto c = read_pod<std::uint64_t>(f);
    if (c != grid.cells_per_dim()[d])
      throw validation_error(path + ": cells_per_dim mismatch with scenario grid");
  }
  const auto m = read_pod<std::uint32_t>(f);
  if (m != inputs.size()) throw validation_error(path + ": input count mismatch with scenario");

  auto td = std::make_shared<TransitionData>();
  td->n_cells = static_cast<std::uint32_t>(grid.n_cells());
  td->n_inputs = m;
  const std::uint64_t np = td->n_pairs();
  td->succ_offsets.reserve(np + 1);
  td->succ_offsets.push_back(0);
  std::vector<double> costs;
  costs.reserve(np);
  for (std::uint64_t p = 0; p < np; ++p) {
    const auto cnt = read_pod<std::uint32_t>(f);
    if (cnt == 0) throw validation_error(path + ": empty successor list");
    for (std::uint32_t i = 0; i < cnt; ++i)
      td->succ.push_back(static_cast<std::uint32_t>(read_pod<std::uint64_t>(f)));
    td->succ_offsets.push_back(td->succ.size());
    costs.push_back(read_pod<double>(f));
  }
  td->build_reverse_index();
  return AbstractSystem(std::move(grid), std::move(inputs), std::move(td), std::move(costs));
}

}  // namespace soc
