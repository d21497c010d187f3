#pragma once

#include <string>
#include <vector>

#include "bec/geometry/components.hpp"

namespace bec::geometry {

enum class IntersectionMethod { Direct, Decomposed, Verified };

inline const char* to_string(IntersectionMethod m) {
  switch (m) {
    case IntersectionMethod::Direct: return "direct";
    case IntersectionMethod::Decomposed: return "decomposed";
    case IntersectionMethod::Verified: return "verified";
  }
  return "?";
}

struct CurveContribution {
  int curve_id = 0;
  int value = 0;
};

struct IntersectionReport {
  int total = 0;
  std::vector<CurveContribution> per_curve;
  IntersectionMethod method = IntersectionMethod::Direct;
};

namespace detail {

/// Membership of V at a far Λ-point; a point on ∂V cannot be classified.
inline bool far_membership(const GoodSet& v, QuarterPoint q) {
  const long X = 2L * q.qx, Y = 2L * q.qy;
  const bool in = v.contains_point(X, Y);
  if (!in && !v.complement().contains_point(X, Y))
    throw Error("path end not classifiable: far point " + to_string(q) + " lies on the boundary of V");
  return in;
}

inline bool end_in(const GoodSet& v, const FarEnd& end) {
  const bool a = far_membership(v, end.near_point);
  const bool b = far_membership(v, end.far_point);
  if (a != b) throw Error("path end not classifiable: V membership differs at the near and far radii");
  return a;
}

/// Crossing count of one oriented curve (the set on its left) with V:
/// 1_V(end at t -> +inf) - 1_V(end at t -> -inf); loops contribute nothing.
inline int curve_crossings(const BoundaryCurve& c, const GoodSet& v) {
  if (c.kind == CurveKind::Loop) return 0;
  return static_cast<int>(end_in(v, *c.tail)) - static_cast<int>(end_in(v, *c.head));
}

}  // namespace detail

/// Intersection number of a simply connected set (one boundary curve) with V.
inline int intersection_number_simple(const SetComponent& simple, const GoodSet& v) {
  if (simple.curves.size() > 1) throw Error("set is not simply connected");
  return simple.curves.empty() ? 0 : detail::curve_crossings(simple.curves.front(), v);
}

/// Sum over every boundary curve of U, oriented with U on the left.
inline IntersectionReport intersection_number_direct(const GoodSet& u, const GoodSet& v) {
  IntersectionReport r;
  r.method = IntersectionMethod::Direct;
  const auto curves = oriented_boundary(u);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const int x = detail::curve_crossings(curves[i], v);
    r.per_curve.push_back({static_cast<int>(i), x});
    r.total += x;
  }
  return r;
}

/// Through the decomposition into components and the simply connected components
/// of their complements: X(U_l, V) = -sum_k X(C_k, V).
inline IntersectionReport intersection_number_decomposed(const GoodSet& u, const GoodSet& v) {
  IntersectionReport r;
  r.method = IntersectionMethod::Decomposed;
  int id = 0;
  for (const auto& comp : connected_components(u)) {
    for (const auto& hole : complement_components(comp)) {
      if (hole.curves.empty()) continue;
      const int x = -intersection_number_simple(hole, v);
      r.per_curve.push_back({id++, x});
      r.total += x;
    }
  }
  return r;
}

/// Computes both ways and insists they agree.
inline IntersectionReport intersection_number(const GoodSet& u, const GoodSet& v) {
  IntersectionReport direct = intersection_number_direct(u, v);
  const IntersectionReport decomposed = intersection_number_decomposed(u, v);
  if (direct.total != decomposed.total)
    throw Error("intersection number disagrees between methods: direct " + std::to_string(direct.total) +
                ", decomposed " + std::to_string(decomposed.total));
  direct.method = IntersectionMethod::Verified;
  return direct;
}

inline IntersectionReport intersection_number(const DiscreteSet& u, const DiscreteSet& v) {
  return intersection_number(GoodSet(u), GoodSet(v));
}

}  // namespace bec::geometry
