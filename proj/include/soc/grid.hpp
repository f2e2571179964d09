#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soc/errors.hpp"

namespace soc {

using Vec = std::vector<double>;
using CellId = std::uint64_t;

/* axis-aligned closed box, lower[d] < upper[d] */
struct Box {
  Vec lower;
  Vec upper;

  Box() = default;
  Box(Vec lo, Vec up);

  std::size_t dim() const { return lower.size(); }
  double width(std::size_t d) const { return upper[d] - lower[d]; }
  bool contains(std::span<const double> x) const;
  bool intersects(const Box& other) const;  // closed semantics, touching counts
  Vec center() const;

  /* throws validation_error; thin = true admits zero-width dimensions
   * (degenerate boxes such as a pointlike disturbance component) */
  void validate(const std::string& what, bool thin = false) const;
};

/* Uniform cell cover of a box. Cells are half-open per dimension, with the
 * last cell of every non-periodic dimension closed above, so the cover is a
 * partition of the domain. Periodic dimensions identify values modulo the
 * domain width. Flat indices are row-major with the last dimension fastest. */
class Grid {
 public:
  Grid() = default;
  Grid(Box domain, std::vector<std::uint64_t> cells_per_dim, std::vector<bool> periodic = {});

  std::size_t dim() const { return domain_.dim(); }
  CellId n_cells() const { return n_cells_; }
  const Box& domain() const { return domain_; }
  const std::vector<std::uint64_t>& cells_per_dim() const { return cells_; }
  std::uint64_t cells(std::size_t d) const { return cells_[d]; }
  double width(std::size_t d) const { return width_[d]; }
  bool periodic(std::size_t d) const { return periodic_[d]; }
  const std::vector<bool>& periodic() const { return periodic_; }

  CellId from_multi(std::span<const std::uint64_t> mi) const;
  void to_multi(CellId id, std::span<std::uint64_t> mi) const;

  /* wraps x into [lower, upper) along periodic dimension d; identity otherwise */
  double wrap(std::size_t d, double x) const;

  /* cell containing x; throws domain_error if a non-periodic coordinate
   * lies outside the domain */
  CellId quantize(std::span<const double> x) const;

  void cell_center(CellId id, std::span<double> out) const;
  Vec cell_center(CellId id) const;
  Box cell_box(CellId id) const;

 private:
  Box domain_;
  std::vector<std::uint64_t> cells_;
  std::vector<bool> periodic_;
  Vec width_;
  std::vector<std::uint64_t> stride_;
  CellId n_cells_ = 0;
};

/* Finite input alphabet: an inclusive uniform grid over the input box. */
struct InputSet {
  Box bounds;
  std::vector<std::uint32_t> values_per_dim;
  std::vector<Vec> values;

  static InputSet uniform(Box bounds, std::vector<std::uint32_t> values_per_dim);
  std::uint32_t size() const { return static_cast<std::uint32_t>(values.size()); }
};

/* Cells whose closure meets the closed box (touching counts). Sorted. */
std::vector<CellId> cells_intersecting(const Grid& grid, const Box& box);

/* Cells entirely contained in the closed box. Sorted. Used to realize
 * target sets so that a stop inside a target cell implies a concrete state
 * inside the target box. */
std::vector<CellId> cells_inside(const Grid& grid, const Box& box);

/* Cells meeting the box on a set of positive measure. Sorted. Used for
 * attainable-set enumeration: the attainable box is closed while source
 * cells are half-open, so zero-measure touching cannot be realized. */
std::vector<CellId> cells_overlapping(const Grid& grid, const Box& box);

}  // namespace soc
