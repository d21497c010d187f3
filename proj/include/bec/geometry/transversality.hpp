#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bec/geometry/boundary.hpp"

namespace bec::geometry {

/// Axis-aligned segment of a traced boundary, quarter units.
struct Segment {
  QuarterPoint a, b;
};

inline std::vector<Segment> boundary_segments(const std::vector<BoundaryCurve>& curves) {
  std::vector<Segment> out;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
      const auto [a, b] = c.segment(i);
      out.push_back({a, b});
    }
  return out;
}

/// Exact l1 distance, in quarter units, from a point to an axis-aligned segment.
inline long l1_distance_q(QuarterPoint p, const Segment& s) {
  auto gap = [](long v, long lo, long hi) { return v < lo ? lo - v : (v > hi ? v - hi : 0L); };
  const long dx = gap(p.qx, std::min(s.a.qx, s.b.qx), std::max(s.a.qx, s.b.qx));
  const long dy = gap(p.qy, std::min(s.a.qy, s.b.qy), std::max(s.a.qy, s.b.qy));
  return dx + dy;
}

/// Distance to a traced boundary; +inf for an empty boundary.
inline double l1_distance_to(QuarterPoint p, const std::vector<Segment>& boundary) {
  long best = std::numeric_limits<long>::max();
  for (const auto& s : boundary) best = std::min(best, l1_distance_q(p, s));
  return best == std::numeric_limits<long>::max() ? std::numeric_limits<double>::infinity() : best / 4.0;
}

/// Psi(x) = 1 + d1(x, dU) + d1(x, dV) for the boundary data of a pair of sets.
class SeparationField {
 public:
  SeparationField(const GoodSet& u, const GoodSet& v)
      : u_curves_(good_set_boundary(u)),
        v_curves_(good_set_boundary(v)),
        u_(boundary_segments(u_curves_)),
        v_(boundary_segments(v_curves_)),
        window_(u.frame().window) {}

  double psi(QuarterPoint p) const { return 1.0 + l1_distance_to(p, u_) + l1_distance_to(p, v_); }
  double psi(Site x) const { return psi(QuarterPoint{4 * x.x1, 4 * x.x2}); }

  int window() const noexcept { return window_; }
  const std::vector<BoundaryCurve>& u_curves() const noexcept { return u_curves_; }
  const std::vector<BoundaryCurve>& v_curves() const noexcept { return v_curves_; }

  /// Lattice sites of the window followed by the boundary points of both sets inside it.
  std::vector<QuarterPoint> samples() const {
    std::vector<QuarterPoint> out;
    for (int a = -window_; a <= window_; ++a)
      for (int b = -window_; b <= window_; ++b) out.push_back({4 * a, 4 * b});
    for (const auto* curves : {&u_curves_, &v_curves_})
      for (const auto& c : *curves)
        for (const auto& q : c.points)
          if (sup_norm(q) <= 4 * window_) out.push_back(q);
    return out;
  }

 private:
  std::vector<BoundaryCurve> u_curves_, v_curves_;
  std::vector<Segment> u_, v_;
  int window_;
};

struct AnnulusRow {
  double r_min = 0;  // annulus 2^k <= |x| < 2^(k+1)
  double r_max = 0;
  double min_psi = 0;
  double min_ratio = 0;  // min of ln Psi / ln |x|
  std::size_t samples = 0;
};

/// Finite-window diagnostic of polynomial separation: pass iff Psi(x) >= |x|^c for
/// every sampled x with |x| >= 1/c. Not a proof of transversality.
struct TransversalityReport {
  double c = 0;
  double exponent_estimate = 0;  // largest exponent that passes, to 1e-6
  std::vector<AnnulusRow> profile;
  bool pass = false;
};

inline TransversalityReport transversality_profile(const SeparationField& field, double c) {
  if (!(c > 0)) throw ValidationError("c", "must be positive");
  TransversalityReport r;
  r.c = c;
  r.pass = true;
  std::vector<std::pair<double, double>> norm_ratio;
  for (const QuarterPoint q : field.samples()) {
    const double norm = std::hypot(q.qx / 4.0, q.qy / 4.0);
    if (norm < 1.0) continue;
    const double psi = field.psi(q);
    const double ratio = norm > 1.0 ? std::log(psi) / std::log(norm) : std::numeric_limits<double>::infinity();
    if (norm >= 1.0 / c && std::log(psi) < c * std::log(norm)) r.pass = false;
    norm_ratio.push_back({norm, ratio});
    const int k = static_cast<int>(std::floor(std::log2(norm)));
    if (static_cast<int>(r.profile.size()) <= k) r.profile.resize(k + 1);
    AnnulusRow& row = r.profile[k];
    if (row.samples == 0) {
      row.r_min = std::ldexp(1.0, k);
      row.r_max = std::ldexp(1.0, k + 1);
      row.min_psi = psi;
      row.min_ratio = ratio;
    }
    row.min_psi = std::min(row.min_psi, psi);
    row.min_ratio = std::min(row.min_ratio, ratio);
    ++row.samples;
  }
  std::erase_if(r.profile, [](const AnnulusRow& row) { return row.samples == 0; });
  // passing is monotone in the exponent, so bisect for the largest passing one
  auto passes = [&](double e) {
    for (const auto& [norm, ratio] : norm_ratio)
      if (norm >= 1.0 / e && ratio < e) return false;
    return true;
  };
  double lo = 0, hi = 2;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  r.exponent_estimate = lo;
  return r;
}

inline TransversalityReport transversality_profile(const DiscreteSet& u, const DiscreteSet& v, double c) {
  return transversality_profile(SeparationField(GoodSet(u), GoodSet(v)), c);
}

/// Lattice site of the window, within sup-radius `limit`, where Psi is smallest
/// (ties: smaller |x|_inf, then lexicographic).
inline Site argmin_separation(const SeparationField& field, int limit) {
  Site best{0, 0};
  double best_psi = field.psi(best);
  for (int a = -limit; a <= limit; ++a)
    for (int b = -limit; b <= limit; ++b) {
      const Site x{a, b};
      const double p = field.psi(x);
      if (p < best_psi || (p == best_psi && (sup_norm(x) < sup_norm(best) ||
                                             (sup_norm(x) == sup_norm(best) && x < best)))) {
        best = x;
        best_psi = p;
      }
    }
  return best;
}

}  // namespace bec::geometry
