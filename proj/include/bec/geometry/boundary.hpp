#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bec/geometry/good_set.hpp"

namespace bec::geometry {

enum class CurveKind { Loop, Path };

/// Where a path continues beyond the tracing box: the first Λ-point reached at the
/// near radius and at the far radius when following the boundary outward.
struct FarEnd {
  QuarterPoint near_point;
  QuarterPoint far_point;
};

/// Polyline on Λ; consecutive points are 1/2 apart. A LOOP does not repeat its
/// first point. For a PATH, `head` continues before points.front() (t -> -inf)
/// and `tail` continues after points.back() (t -> +inf).
struct BoundaryCurve {
  std::vector<QuarterPoint> points;
  CurveKind kind = CurveKind::Loop;
  std::optional<FarEnd> head;
  std::optional<FarEnd> tail;

  std::size_t segment_count() const { return kind == CurveKind::Loop ? points.size() : points.size() - 1; }
  std::pair<QuarterPoint, QuarterPoint> segment(std::size_t i) const {
    return {points[i], points[(i + 1) % points.size()]};
  }

  BoundaryCurve reversed() const {
    BoundaryCurve r = *this;
    std::reverse(r.points.begin(), r.points.end());
    if (kind == CurveKind::Loop) {
      // keep the same start point
      std::rotate(r.points.begin(), r.points.end() - 1, r.points.end());
    }
    std::swap(r.head, r.tail);
    return r;
  }
};

namespace detail {

inline constexpr std::array<std::array<int, 2>, 4> kDirections = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

/// Is [q, q + (2dx, 2dy)] (quarter units) part of ∂S: exactly one adjacent cell in S.
inline bool boundary_edge(const GoodSet& s, QuarterPoint q, int dx, int dy) {
  const int mx = q.qx + dx, my = q.qy + dy;
  const int px = dy != 0 ? 1 : 0, py = dx != 0 ? 1 : 0;
  const bool a = s.contains_cell({(mx + px) / 2, (my + py) / 2});
  const bool b = s.contains_cell({(mx - px) / 2, (my - py) / 2});
  return a != b;
}

inline std::string to_string(QuarterPoint q) {
  return "(" + std::to_string(q.qx) + "/4," + std::to_string(q.qy) + "/4)";
}

/// Neighbors of q along ∂S; the count is checked against the two-neighbor law.
inline std::vector<QuarterPoint> boundary_neighbors(const GoodSet& s, QuarterPoint q) {
  std::vector<QuarterPoint> out;
  for (const auto& d : kDirections)
    if (boundary_edge(s, q, d[0], d[1])) out.push_back({q.qx + 2 * d[0], q.qy + 2 * d[1]});
  if (!out.empty() && out.size() != 2)
    throw Error("two-neighbor law violated at " + to_string(q) + ": " + std::to_string(out.size()) + " neighbors");
  return out;
}

/// Follows ∂S from `end` (whose neighbor inside the walk is `prev`) until the far radius.
inline FarEnd follow_outward(const GoodSet& s, QuarterPoint end, QuarterPoint prev) {
  const Frame& f = s.frame();
  const int box = f.trace_box_q();
  const int near_q = 4 * f.near, far_q = 4 * f.far;
  std::optional<QuarterPoint> near_point;
  QuarterPoint cur = end;
  for (long steps = 0; steps < 64L * far_q * 4; ++steps) {
    const auto nb = boundary_neighbors(s, cur);
    if (nb.size() != 2) throw Error("boundary ends at " + to_string(cur));
    const QuarterPoint next = nb[0] == prev ? nb[1] : nb[0];
    prev = cur;
    cur = next;
    const int r = sup_norm(cur);
    if (r <= box) throw Error("path end not classifiable: boundary re-enters the tracing box at " + to_string(cur));
    if (!near_point && r >= near_q) near_point = cur;
    if (r >= far_q) return {*near_point, cur};
  }
  throw Error("path end not classifiable: boundary does not leave the far radius");
}

}  // namespace detail

/// Traces every connected component of ∂S that meets the tracing box |x|_inf <= L + 2.
/// Curves are returned unoriented, starting at their lexicographically smallest
/// rim point (paths) or smallest point (loops); paths carry their far ends.
inline std::vector<BoundaryCurve> good_set_boundary(const GoodSet& s) {
  const int Q = s.frame().trace_box_q();
  const int per_axis = Q + 1;  // odd values in [-Q, Q]
  auto idx = [&](QuarterPoint q) {
    return static_cast<std::size_t>((q.qx + Q) / 2) * per_axis + static_cast<std::size_t>((q.qy + Q) / 2);
  };
  auto in_box = [Q](QuarterPoint q) { return sup_norm(q) <= Q; };

  std::vector<std::vector<QuarterPoint>> adj(static_cast<std::size_t>(per_axis) * per_axis);
  std::vector<QuarterPoint> endpoints;
  std::vector<QuarterPoint> on_curve;
  for (int qx = -Q; qx <= Q; qx += 2)
    for (int qy = -Q; qy <= Q; qy += 2) {
      const QuarterPoint q{qx, qy};
      auto nb = detail::boundary_neighbors(s, q);
      std::vector<QuarterPoint> inside;
      for (const auto& n : nb)
        if (in_box(n)) inside.push_back(n);
      if (inside.empty()) continue;
      if (inside.size() == 1) endpoints.push_back(q);
      on_curve.push_back(q);
      adj[idx(q)] = std::move(inside);
    }

  std::vector<std::uint8_t> visited(adj.size(), 0);
  std::vector<BoundaryCurve> curves;

  std::sort(endpoints.begin(), endpoints.end());
  for (const QuarterPoint start : endpoints) {
    if (visited[idx(start)]) continue;
    BoundaryCurve c;
    c.kind = CurveKind::Path;
    QuarterPoint prev = start, cur = start;
    c.points.push_back(start);
    visited[idx(start)] = 1;
    while (true) {
      const auto& nb = adj[idx(cur)];
      if (cur != start && nb.size() == 1) break;
      const QuarterPoint next = nb.size() == 1 ? nb[0] : (nb[0] == prev ? nb[1] : nb[0]);
      prev = cur;
      cur = next;
      if (visited[idx(cur)]) throw Error("tracing revisited " + detail::to_string(cur));
      visited[idx(cur)] = 1;
      c.points.push_back(cur);
    }
    if (c.points.size() < 2) throw Error("degenerate path at " + detail::to_string(start));
    const std::size_t n = c.points.size();
    c.head = detail::follow_outward(s, c.points.front(), c.points[1]);
    c.tail = detail::follow_outward(s, c.points.back(), c.points[n - 2]);
    curves.push_back(std::move(c));
  }

  std::sort(on_curve.begin(), on_curve.end());
  for (const QuarterPoint start : on_curve) {
    if (visited[idx(start)]) continue;
    BoundaryCurve c;
    c.kind = CurveKind::Loop;
    const auto& first = adj[idx(start)];
    if (first.size() != 2) throw Error("loop point with one neighbor at " + detail::to_string(start));
    QuarterPoint prev = start;
    QuarterPoint cur = std::min(first[0], first[1]);
    c.points.push_back(start);
    visited[idx(start)] = 1;
    while (cur != start) {
      if (visited[idx(cur)]) throw Error("tracing revisited " + detail::to_string(cur));
      visited[idx(cur)] = 1;
      c.points.push_back(cur);
      const auto& nb = adj[idx(cur)];
      const QuarterPoint next = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = next;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

/// Left/right test points of a segment: midpoint ± (1/8) left-normal, in eighth units.
struct SideProbe {
  long left_x, left_y, right_x, right_y;
};

inline SideProbe side_probe(QuarterPoint a, QuarterPoint b) {
  const int dx = (b.qx - a.qx) / 2, dy = (b.qy - a.qy) / 2;
  const long mx = a.qx + b.qx, my = a.qy + b.qy;  // 8 * midpoint
  return {mx - dy, my + dx, mx + dy, my - dx};
}

/// Orients a traced component of ∂S so that S lies to its left on every segment.
inline BoundaryCurve orient_with_set_on_left(const BoundaryCurve& curve, const GoodSet& s) {
  if (curve.points.size() < 2) throw Error("curve has fewer than two points");
  const auto [a, b] = curve.segment(0);
  const SideProbe p0 = side_probe(a, b);
  BoundaryCurve out = s.contains_point(p0.left_x, p0.left_y) ? curve : curve.reversed();
  for (std::size_t i = 0; i < out.segment_count(); ++i) {
    const auto [u, v] = out.segment(i);
    const SideProbe p = side_probe(u, v);
    if (!s.contains_point(p.left_x, p.left_y) || s.contains_point(p.right_x, p.right_y))
      throw Error("inconsistent left-of-curve test at segment " + std::to_string(i) + " starting " +
                  detail::to_string(u));
  }
  return out;
}

inline std::vector<BoundaryCurve> oriented_boundary(const GoodSet& s) {
  auto curves = good_set_boundary(s);
  for (auto& c : curves) c = orient_with_set_on_left(c, s);
  return curves;
}

}  // namespace bec::geometry
