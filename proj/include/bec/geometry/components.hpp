#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "bec/geometry/boundary.hpp"

namespace bec::geometry {

/// One connected component of a good set, with its lattice view and boundary.
struct SetComponent {
  GoodSet set;
  std::optional<DiscreteSet> lattice;  // only for components of a lattice set's good set
  std::vector<BoundaryCurve> curves;  // oriented with the component on the left
};

namespace detail {

/// 4-connected labels of the cells of `s` in its materialized region; -1 marks cells outside.
inline std::vector<int> label_cells(const GoodSet& s, int& count) {
  const auto grid = s.materialize();
  const int n = s.grid_side();
  std::vector<int> label(grid.size(), -1);
  count = 0;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < grid.size(); ++seed) {
    if (!grid[seed] || label[seed] >= 0) continue;
    label[seed] = count;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      const int r = static_cast<int>(i / n), c = static_cast<int>(i % n);
      const int nr[4] = {r + 1, r - 1, r, r};
      const int nc[4] = {c, c, c + 1, c - 1};
      for (int k = 0; k < 4; ++k) {
        if (nr[k] < 0 || nr[k] >= n || nc[k] < 0 || nc[k] >= n) continue;
        const std::size_t j = static_cast<std::size_t>(nr[k]) * n + nc[k];
        if (grid[j] && label[j] < 0) {
          label[j] = count;
          queue.push_back(j);
        }
      }
    }
    ++count;
  }
  return label;
}

inline std::vector<GoodSet> split_cells(const GoodSet& s) {
  int count = 0;
  const auto label = label_cells(s, count);
  std::vector<GoodSet> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    auto g = std::make_shared<std::vector<std::uint8_t>>(label.size(), 0);
    for (std::size_t i = 0; i < label.size(); ++i) (*g)[i] = label[i] == k ? 1 : 0;
    out.push_back(s.with_cells(std::move(g)));
  }
  return out;
}

/// Lattice view of a component: sites whose own cell lies in it; tail pieces of the
/// parent tail are kept when their samples on the ring |x|_inf = near all land in it.
inline DiscreteSet lattice_view(const GoodSet& component, const TailSpec& parent_tail) {
  const int L = component.frame().window;
  const int ring = component.frame().near;
  auto in = [&](Site x) { return component.contains_cell({2 * x.x1, 2 * x.x2}); };

  std::vector<Piece> kept;
  for (const Piece& p : parent_tail.pieces()) {
    int hits = 0, misses = 0;
    for (int t = -ring; t <= ring; ++t) {
      const Site ring_sites[4] = {{t, ring}, {t, -ring}, {ring, t}, {-ring, t}};
      for (const Site x : ring_sites) {
        if (!TailSpec::piece_contains(p, x)) continue;
        (in(x) ? hits : misses) += 1;
      }
    }
    if (hits > 0 && misses > 0) throw Error("tail piece spans several components");
    if (hits > 0) kept.push_back(p);
  }
  TailSpec tail = kept.size() == parent_tail.pieces().size() ? parent_tail
                 : kept.empty()                                ? TailSpec::empty()
                                                               : TailSpec::from_pieces(std::move(kept));
  return DiscreteSet::from_predicate(L, std::move(tail), in);
}

}  // namespace detail

/// Connected components of a good set; with a tail, each also gets its lattice view.
inline std::vector<SetComponent> connected_components(const GoodSet& s, const TailSpec* tail = nullptr) {
  std::vector<SetComponent> out;
  for (GoodSet& part : detail::split_cells(s)) {
    std::optional<DiscreteSet> lattice;
    if (tail) lattice = detail::lattice_view(part, *tail);
    auto curves = oriented_boundary(part);
    out.push_back({std::move(part), std::move(lattice), std::move(curves)});
  }
  return out;
}

inline std::vector<SetComponent> connected_components(const DiscreteSet& set) {
  return connected_components(GoodSet(set), &set.tail());
}

/// Components of the complement of a connected set. Each owns at most one boundary
/// curve, so that it is simply connected.
inline std::vector<SetComponent> complement_components(const SetComponent& component) {
  auto parts = connected_components(component.set.complement());
  for (const auto& p : parts)
    if (p.curves.size() > 1)
      throw Error("complement component bounded by " + std::to_string(p.curves.size()) + " curves");
  return parts;
}

}  // namespace bec::geometry
