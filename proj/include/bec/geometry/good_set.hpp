#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bec/geometry/discrete_set.hpp"

namespace bec::geometry {

/// Point of the quarter-integer lattice, coordinates (qx/4, qy/4). Boundary vertices
/// live on Λ = (1/4, 1/4) + (Z/2)^2, i.e. qx and qy are both odd.
struct QuarterPoint {
  int qx = 0;
  int qy = 0;
  friend constexpr auto operator<=>(const QuarterPoint&, const QuarterPoint&) = default;
};

constexpr bool on_boundary_lattice(QuarterPoint p) { return (p.qx & 1) != 0 && (p.qy & 1) != 0; }
constexpr int sup_norm(QuarterPoint p) { return std::abs(p.qx) > std::abs(p.qy) ? std::abs(p.qx) : std::abs(p.qy); }

/// Half-unit cell centred at (cx/2, cy/2); its corners are Λ-points.
struct Cell {
  int cx = 0;
  int cy = 0;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

/// Radii derived from a window half-width L (all in sites).
///   trace:   boundary curves are traced inside |x|_inf <= L + 2
///   near/far: path ends are followed out to 2x and 4x the trace radius
///   cells:   materialized cell grids cover the far radius with margin
struct Frame {
  int window = 0;
  int trace = 0;
  int near = 0;
  int far = 0;
  int cell_radius = 0;  // in cell units (half-sites)

  static Frame for_window(int L) {
    Frame f;
    f.window = L;
    f.trace = L + 2;
    f.near = 2 * f.trace;
    f.far = 4 * f.trace;
    f.cell_radius = 2 * (f.far + 2);
    return f;
  }
  int trace_box_q() const { return 4 * trace + 1; }
};

/// The continuum good set A = {x : d_inf(x, Z^2 \ 𝔸) > 3/4} of a DiscreteSet, or a
/// set derived from one (a connected component, a complement) that is a union of
/// half-unit cells.
///
/// A cell lies in A iff every lattice site within sup-distance 1/2 of its centre is
/// a member; A is the interior of the union of its closed cells.
class GoodSet {
 public:
  explicit GoodSet(const DiscreteSet& set)
      : root_(std::make_shared<const DiscreteSet>(set)), frame_(Frame::for_window(set.half_width())) {}

  const DiscreteSet& root() const noexcept { return *root_; }
  const Frame& frame() const noexcept { return frame_; }
  bool is_root() const noexcept { return grid_ == nullptr && !complemented_; }
  bool complemented() const noexcept { return complemented_; }

  bool contains_cell(Cell c) const {
    if (grid_) {
      if (std::abs(c.cx) > frame_.cell_radius || std::abs(c.cy) > frame_.cell_radius)
        throw Error("cell outside the materialized region of a derived set");
      return (*grid_)[grid_offset(c)] != 0;
    }
    return root_cell(c) != complemented_;
  }

  /// Open-set membership of a point given in units of 1/8.
  bool contains_point(long X, long Y) const {
    int xs[2], ys[2];
    const int nx = cells_touching(X, xs);
    const int ny = cells_touching(Y, ys);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        if (!contains_cell({xs[i], ys[j]})) return false;
    return true;
  }

  /// Set complement interior int(A^c): the union of the cells outside A.
  GoodSet complement() const {
    GoodSet out = *this;
    if (grid_) {
      auto g = std::make_shared<std::vector<std::uint8_t>>(*grid_);
      for (auto& b : *g) b = b ? 0 : 1;
      out.grid_ = std::move(g);
    } else {
      out.complemented_ = !complemented_;
    }
    return out;
  }

  /// Derived set consisting of the given cells of the materialized region.
  GoodSet with_cells(std::shared_ptr<const std::vector<std::uint8_t>> grid) const {
    GoodSet out = *this;
    out.grid_ = std::move(grid);
    out.complemented_ = false;
    return out;
  }

  int grid_side() const noexcept { return 2 * frame_.cell_radius + 1; }
  std::size_t grid_offset(Cell c) const noexcept {
    return static_cast<std::size_t>(c.cx + frame_.cell_radius) * grid_side() + (c.cy + frame_.cell_radius);
  }
  Cell grid_cell(std::size_t offset) const noexcept {
    return {static_cast<int>(offset / grid_side()) - frame_.cell_radius,
            static_cast<int>(offset % grid_side()) - frame_.cell_radius};
  }

  /// Materializes the membership of every cell in the frame's cell region.
  std::vector<std::uint8_t> materialize() const {
    std::vector<std::uint8_t> g(static_cast<std::size_t>(grid_side()) * grid_side());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = contains_cell(grid_cell(i)) ? 1 : 0;
    return g;
  }

 private:
  bool root_cell(Cell c) const {
    int xs[2], ys[2];
    const int nx = sites_near(c.cx, xs);
    const int ny = sites_near(c.cy, ys);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        if (!root_->member({xs[i], ys[j]})) return false;
    return true;
  }

  // Integer coordinates within 1/2 of the half-integer coordinate c/2.
  static int sites_near(int c, int out[2]) {
    if ((c & 1) == 0) {
      out[0] = c / 2;
      return 1;
    }
    out[0] = (c - 1) / 2;
    out[1] = (c + 1) / 2;
    return 2;
  }

  // Cells whose closed extent [4c - 2, 4c + 2] (eighth units) contains X.
  static int cells_touching(long X, int out[2]) {
    const long r = ((X % 4) + 4) % 4;
    if (r == 2) {
      out[0] = static_cast<int>((X - 2) / 4);
      out[1] = static_cast<int>((X + 2) / 4);
      return 2;
    }
    out[0] = static_cast<int>(DiscreteSet::floor_div(X + 2, 4));
    return 1;
  }

  std::shared_ptr<const DiscreteSet> root_;
  Frame frame_;
  bool complemented_ = false;
  std::shared_ptr<const std::vector<std::uint8_t>> grid_;
};

}  // namespace bec::geometry
