#pragma once

// Independent reference computations used by the tests. None of these call into the
// library beyond plain data accessors.

#include <armadillo>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "bec/geometry/discrete_set.hpp"
#include "bec/lattice.hpp"

namespace oracle {

/// Chern number of the lower band by plaquette Wilson loops on an n x n k-grid,
/// with the Berry phase of a loop taken as -arg(product of link overlaps).
inline int wilson_loop_chern(const bec::QwzModel& model, int n = 100) {
  const double step = 2 * std::numbers::pi / n;
  std::vector<arma::cx_vec> lower(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      arma::vec e;
      arma::cx_mat v;
      arma::eig_sym(e, v, arma::cx_mat(model.symbol(a * step, b * step)));
      lower[static_cast<std::size_t>(a) * n + b] = v.col(0);
    }
  auto at = [&](int a, int b) -> const arma::cx_vec& {
    return lower[static_cast<std::size_t>((a + n) % n) * n + (b + n) % n];
  };
  auto link = [](const arma::cx_vec& x, const arma::cx_vec& y) {
    const std::complex<double> d = arma::cdot(x, y);
    return d / std::abs(d);
  };
  double total = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto w = link(at(a, b), at(a + 1, b)) * link(at(a + 1, b), at(a + 1, b + 1)) *
                     link(at(a + 1, b + 1), at(a, b + 1)) * link(at(a, b + 1), at(a, b));
      total += -std::arg(w);
    }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

/// Point (X/8, Y/8) lies in {x : d_inf(x, Z^2 \ A) > 3/4}, by scanning nearby sites.
inline bool good_point(const bec::geometry::DiscreteSet& a, long X, long Y) {
  const long cx = X / 8, cy = Y / 8;
  for (long s1 = cx - 3; s1 <= cx + 3; ++s1)
    for (long s2 = cy - 3; s2 <= cy + 3; ++s2) {
      if (a.member({static_cast<int>(s1), static_cast<int>(s2)})) continue;
      const long d = std::max(std::abs(8 * s1 - X), std::abs(8 * s2 - Y));
      if (d <= 6) return false;
    }
  return true;
}

/// Half-unit boundary segment between Λ-points, stored in quarter units with the
/// lexicographically smaller end first.
using Segment = std::pair<std::pair<int, int>, std::pair<int, int>>;

inline Segment make_segment(int ax, int ay, int bx, int by) {
  std::pair<int, int> a{ax, ay}, b{bx, by};
  if (b < a) std::swap(a, b);
  return {a, b};
}

/// Boundary segments inside |q|_inf <= box (quarter units): the 1/8-probes on the
/// two sides of the segment midpoint disagree.
inline std::set<Segment> boundary_segments(const bec::geometry::DiscreteSet& a, int box) {
  std::set<Segment> out;
  for (int qx = -box; qx <= box; ++qx) {
    if (!(qx & 1)) continue;
    for (int qy = -box; qy <= box; ++qy) {
      if (!(qy & 1)) continue;
      // horizontal segment to (qx + 2, qy), vertical to (qx, qy + 2); midpoint in eighths
      if (qx + 2 <= box) {
        const long mx = 2L * qx + 2, my = 2L * qy;
        if (good_point(a, mx, my + 1) != good_point(a, mx, my - 1)) out.insert(make_segment(qx, qy, qx + 2, qy));
      }
      if (qy + 2 <= box) {
        const long mx = 2L * qx, my = 2L * qy + 2;
        if (good_point(a, mx + 1, my) != good_point(a, mx - 1, my)) out.insert(make_segment(qx, qy, qx, qy + 2));
      }
    }
  }
  return out;
}

/// Number of 4-connected components of A's sites inside |x|_inf <= r.
inline int site_components(const bec::geometry::DiscreteSet& a, int r) {
  std::set<std::pair<int, int>> seen;
  int count = 0;
  for (int x1 = -r; x1 <= r; ++x1)
    for (int x2 = -r; x2 <= r; ++x2) {
      if (!a.member({x1, x2}) || seen.count({x1, x2})) continue;
      ++count;
      std::queue<std::pair<int, int>> q;
      q.push({x1, x2});
      seen.insert({x1, x2});
      while (!q.empty()) {
        const auto [y1, y2] = q.front();
        q.pop();
        for (const auto [d1, d2] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int z1 = y1 + d1, z2 = y2 + d2;
          if (std::max(std::abs(z1), std::abs(z2)) > r || !a.member({z1, z2}) || seen.count({z1, z2})) continue;
          seen.insert({z1, z2});
          q.push({z1, z2});
        }
      }
    }
  return count;
}

}  // namespace oracle
