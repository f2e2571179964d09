#include "soc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace soc {

Box::Box(Vec lo, Vec up) : lower(std::move(lo)), upper(std::move(up)) {}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t d = 0; d < dim(); ++d)
    if (x[d] < lower[d] || x[d] > upper[d]) return false;
  return true;
}

bool Box::intersects(const Box& other) const {
  for (std::size_t d = 0; d < dim(); ++d)
    if (other.upper[d] < lower[d] || other.lower[d] > upper[d]) return false;
  return true;
}

Vec Box::center() const {
  Vec c(dim());
  for (std::size_t d = 0; d < dim(); ++d) c[d] = 0.5 * (lower[d] + upper[d]);
  return c;
}

void Box::validate(const std::string& what, bool thin) const {
  if (lower.size() != upper.size())
    throw validation_error(what + ": lower/upper dimension mismatch");
  for (std::size_t d = 0; d < dim(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]))
      throw validation_error(what + ": non-finite bound in dimension " + std::to_string(d));
    if (thin ? !(lower[d] <= upper[d]) : !(lower[d] < upper[d]))
      throw validation_error(what + ": lower " + std::string(thin ? ">" : ">=") +
                             " upper in dimension " + std::to_string(d));
  }
}

Grid::Grid(Box domain, std::vector<std::uint64_t> cells_per_dim, std::vector<bool> periodic)
    : domain_(std::move(domain)), cells_(std::move(cells_per_dim)), periodic_(std::move(periodic)) {
  domain_.validate("grid domain");
  if (cells_.size() != domain_.dim())
    throw validation_error("grid: cells_per_dim dimension mismatch");
  if (periodic_.empty()) periodic_.assign(domain_.dim(), false);
  if (periodic_.size() != domain_.dim())
    throw validation_error("grid: periodic dimension mismatch");
  width_.resize(dim());
  n_cells_ = 1;
  for (std::size_t d = 0; d < dim(); ++d) {
    if (cells_[d] == 0)
      throw validation_error("grid: zero cells in dimension " + std::to_string(d));
    width_[d] = domain_.width(d) / static_cast<double>(cells_[d]);
    if (n_cells_ > std::numeric_limits<CellId>::max() / cells_[d])
      throw validation_error("grid: cell count overflow");
    n_cells_ *= cells_[d];
  }
  stride_.resize(dim());
  std::uint64_t s = 1;
  for (std::size_t d = dim(); d-- > 0;) {
    stride_[d] = s;
    s *= cells_[d];
  }
}

CellId Grid::from_multi(std::span<const std::uint64_t> mi) const {
  CellId id = 0;
  for (std::size_t d = 0; d < dim(); ++d) id += mi[d] * stride_[d];
  return id;
}

void Grid::to_multi(CellId id, std::span<std::uint64_t> mi) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    mi[d] = id / stride_[d];
    id %= stride_[d];
  }
}

double Grid::wrap(std::size_t d, double x) const {
  if (!periodic_[d]) return x;
  const double lo = domain_.lower[d], w = domain_.width(d);
  double y = x - w * std::floor((x - lo) / w);
  if (y >= domain_.upper[d]) y -= w;
  if (y < lo) y += w;
  return y;
}

CellId Grid::quantize(std::span<const double> x) const {
  if (x.size() != dim()) throw validation_error("quantize: state dimension mismatch");
  CellId id = 0;
  for (std::size_t d = 0; d < dim(); ++d) {
    double v = x[d];
    if (periodic_[d]) {
      v = wrap(d, v);
    } else if (v < domain_.lower[d] || v > domain_.upper[d]) {
      throw domain_error("quantize: coordinate " + std::to_string(d) + " = " +
                         std::to_string(v) + " outside domain [" +
                         std::to_string(domain_.lower[d]) + "," +
                         std::to_string(domain_.upper[d]) + "]");
    }
    auto k = static_cast<std::int64_t>(std::floor((v - domain_.lower[d]) / width_[d]));
    if (k < 0) k = 0;
    if (k >= static_cast<std::int64_t>(cells_[d])) k = static_cast<std::int64_t>(cells_[d]) - 1;
    id += static_cast<CellId>(k) * stride_[d];
  }
  return id;
}

void Grid::cell_center(CellId id, std::span<double> out) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    const std::uint64_t k = id / stride_[d];
    id %= stride_[d];
    out[d] = domain_.lower[d] + (static_cast<double>(k) + 0.5) * width_[d];
  }
}

Vec Grid::cell_center(CellId id) const {
  Vec c(dim());
  cell_center(id, c);
  return c;
}

Box Grid::cell_box(CellId id) const {
  Box b;
  b.lower.resize(dim());
  b.upper.resize(dim());
  for (std::size_t d = 0; d < dim(); ++d) {
    const std::uint64_t k = id / stride_[d];
    id %= stride_[d];
    b.lower[d] = domain_.lower[d] + static_cast<double>(k) * width_[d];
    b.upper[d] = (k + 1 == cells_[d]) ? domain_.upper[d]
                                      : domain_.lower[d] + static_cast<double>(k + 1) * width_[d];
  }
  return b;
}

InputSet InputSet::uniform(Box bounds, std::vector<std::uint32_t> values_per_dim) {
  bounds.validate("input bounds");
  if (values_per_dim.size() != bounds.dim())
    throw validation_error("input set: values_per_dim dimension mismatch");
  InputSet is;
  is.bounds = bounds;
  is.values_per_dim = values_per_dim;
  std::uint64_t total = 1;
  for (auto k : values_per_dim) {
    if (k == 0) throw validation_error("input set: zero values in a dimension");
    total *= k;
  }
  if (total > (1u << 24)) throw validation_error("input set: too many input values");
  const std::size_t m = bounds.dim();
  std::vector<std::uint32_t> mi(m, 0);
  is.values.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    Vec u(m);
    for (std::size_t d = 0; d < m; ++d) {
      const std::uint32_t k = values_per_dim[d];
      u[d] = (k == 1) ? 0.5 * (bounds.lower[d] + bounds.upper[d])
                      : bounds.lower[d] + static_cast<double>(mi[d]) * bounds.width(d) /
                                              static_cast<double>(k - 1);
    }
    is.values.push_back(std::move(u));
    for (std::size_t d = m; d-- > 0;) {  // odometer, last dimension fastest
      if (++mi[d] < values_per_dim[d]) break;
      mi[d] = 0;
    }
  }
  return is;
}

namespace {

enum class OverlapMode { touch, positive, inside };

constexpr double kEps = 1e-9;  // index-space tolerance, in cell widths

/* Indices in dimension d whose cell meets [bl,bu] under the given mode.
 * Appends sorted unique indices to out; returns false if the box misses
 * the dimension entirely. */
bool dim_indices(const Grid& g, std::size_t d, double bl, double bu, OverlapMode mode,
                 std::vector<std::uint64_t>& out) {
  const double lo = g.domain().lower[d], hi = g.domain().upper[d], w = g.width(d);
  const auto n = static_cast<std::int64_t>(g.cells(d));

  auto piece = [&](double a, double b) {
    // a,b clipped to [lo,hi]; emit indices of cells meeting [a,b]
    std::int64_t k0, k1;
    switch (mode) {
      case OverlapMode::touch: {
        k0 = (a <= lo) ? 0 : static_cast<std::int64_t>(std::floor((a - lo) / w + kEps));
        if (k0 >= n) k0 = n - 1;  // box touching the closed top edge
        k1 = (b >= hi) ? n - 1 : static_cast<std::int64_t>(std::floor((b - lo) / w + kEps));
        break;
      }
      case OverlapMode::positive: {
        // overlap below kEps cell widths does not count; keeps boundaries
        // computed through non-representable widths from pulling in
        // zero-measure neighbours
        if (!(b > a)) return;
        k0 = (a <= lo) ? 0 : static_cast<std::int64_t>(std::floor((a - lo) / w + kEps));
        k1 = (b >= hi) ? n - 1 : static_cast<std::int64_t>(std::ceil((b - lo) / w - kEps)) - 1;
        break;
      }
      case OverlapMode::inside: {
        k0 = (a <= lo) ? 0 : static_cast<std::int64_t>(std::ceil((a - lo) / w - kEps));
        k1 = (b >= hi) ? n - 1 : static_cast<std::int64_t>(std::floor((b - lo) / w + kEps)) - 1;
        break;
      }
    }
    if (k0 < 0) k0 = 0;
    if (k1 >= n) k1 = n - 1;
    for (std::int64_t k = k0; k <= k1; ++k) out.push_back(static_cast<std::uint64_t>(k));
  };

  if (g.periodic(d)) {
    if (bu - bl >= g.domain().width(d)) {
      for (std::int64_t k = 0; k < n; ++k) out.push_back(static_cast<std::uint64_t>(k));
    } else {
      const double a = g.wrap(d, bl);
      const double b = a + (bu - bl);
      piece(a, std::min(b, hi));
      if (b >= hi) piece(lo, lo + (b - hi));  // wrapped remainder; [lo,lo] only touches cell 0
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  } else {
    if (bu < lo || bl > hi) return false;
    piece(std::max(bl, lo), std::min(bu, hi));
  }
  return !out.empty();
}

std::vector<CellId> enumerate_cells(const Grid& g, const Box& box, OverlapMode mode) {
  if (box.dim() != g.dim()) throw validation_error("cell query: box dimension mismatch");
  const std::size_t nd = g.dim();
  std::vector<std::vector<std::uint64_t>> idx(nd);
  for (std::size_t d = 0; d < nd; ++d)
    if (!dim_indices(g, d, box.lower[d], box.upper[d], mode, idx[d])) return {};

  std::vector<std::uint64_t> strides(nd);
  std::uint64_t s = 1;
  for (std::size_t d = nd; d-- > 0;) {
    strides[d] = s;
    s *= g.cells(d);
  }
  std::uint64_t total = 1;
  for (const auto& v : idx) total *= v.size();
  std::vector<CellId> cells;
  cells.reserve(total);
  std::vector<std::size_t> pos(nd, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    CellId id = 0;
    for (std::size_t d = 0; d < nd; ++d) id += idx[d][pos[d]] * strides[d];
    cells.push_back(id);
    for (std::size_t d = nd; d-- > 0;) {
      if (++pos[d] < idx[d].size()) break;
      pos[d] = 0;
    }
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

}  // namespace

std::vector<CellId> cells_intersecting(const Grid& grid, const Box& box) {
  return enumerate_cells(grid, box, OverlapMode::touch);
}

std::vector<CellId> cells_inside(const Grid& grid, const Box& box) {
  return enumerate_cells(grid, box, OverlapMode::inside);
}

std::vector<CellId> cells_overlapping(const Grid& grid, const Box& box) {
  return enumerate_cells(grid, box, OverlapMode::positive);
}

}  // namespace soc
