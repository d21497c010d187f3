#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bec/geometry/intersection.hpp"
#include "bec/geometry/presets.hpp"

namespace bec::geometry {

struct FuzzFailure {
  int scene = 0;
  std::string property;
  std::string detail;
};

struct FuzzSummary {
  int scenes = 0;
  int checks = 0;
  std::vector<FuzzFailure> failures;
};

namespace detail {

inline Patch random_patch(std::mt19937_64& rng, int L, int size) {
  const int h = size / 2;
  const int reach = L - DiscreteSet::kRimBelt - h - 1;
  std::uniform_int_distribution<int> pos(-std::min(reach, 5), std::min(reach, 5));
  std::bernoulli_distribution bit(0.35);
  Patch p;
  p.size = size;
  p.center = {pos(rng), pos(rng)};
  p.bits.resize(static_cast<std::size_t>(size) * size);
  for (auto& b : p.bits) b = bit(rng) ? 1 : 0;
  return p;
}

inline DiscreteSet random_blob(std::mt19937_64& rng, int L) {
  std::uniform_int_distribution<int> c(-4, 4), r(0, 2);
  const int n = 1 + static_cast<int>(rng() % 3);
  std::vector<std::pair<Site, int>> squares;
  for (int i = 0; i < n; ++i) squares.push_back({{c(rng), c(rng)}, r(rng)});
  return DiscreteSet::from_predicate(L, TailSpec::empty(), [&](Site x) {
    for (const auto& [s, rad] : squares)
      if (std::abs(x.x1 - s.x1) <= rad && std::abs(x.x2 - s.x2) <= rad) return true;
    return false;
  });
}

inline TailSpec random_half_plane(std::mt19937_64& rng) {
  static constexpr int normals[8][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const auto& n = normals[rng() % 8];
  std::uniform_int_distribution<int> b(-2, 2);
  return TailSpec::half_plane(n[0], n[1], b(rng));
}

/// A random pair: a preset, a blob against a half-plane, or a half-plane against a
/// half-plane, followed by up to two compact perturbations of each set.
inline ScenePair random_scene(std::mt19937_64& rng, int L) {
  ScenePair s{DiscreteSet(L), DiscreteSet(L), 0};
  switch (rng() % 3) {
    case 0: s = preset_scene(static_cast<Preset>(rng() % 7), L); break;
    case 1: s = {random_blob(rng, L), DiscreteSet(L, random_half_plane(rng)), 0}; break;
    default: {
      TailSpec a = random_half_plane(rng), b = random_half_plane(rng);
      while (b.pieces().front().front().a1 * a.pieces().front().front().a2 ==
             b.pieces().front().front().a2 * a.pieces().front().front().a1)
        b = random_half_plane(rng);
      s = {DiscreteSet(L, a), DiscreteSet(L, b), 0};
    }
  }
  for (int k = static_cast<int>(rng() % 3); k > 0; --k) s.u = perturb_compactly(s.u, random_patch(rng, L, 5));
  for (int k = static_cast<int>(rng() % 3); k > 0; --k) s.v = perturb_compactly(s.v, random_patch(rng, L, 3));
  return s;
}

}  // namespace detail

/// Structural checks on the good set of one lattice set; returns a failure message or "".
inline std::string check_good_set(const DiscreteSet& a) {
  const GoodSet g(a);
  const int L = a.half_width();
  for (int x1 = -L - 2; x1 <= L + 2; ++x1)
    for (int x2 = -L - 2; x2 <= L + 2; ++x2)
      if (g.contains_point(8L * x1, 8L * x2) != a.member({x1, x2}))
        return "roundtrip: site (" + std::to_string(x1) + "," + std::to_string(x2) + ")";
  std::vector<BoundaryCurve> curves;
  try {
    curves = oriented_boundary(g);
  } catch (const Error& e) {
    return std::string("tracing: ") + e.what();
  }
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.points.size(); ++i)
      if (!on_boundary_lattice(c.points[i])) return "integer point on boundary";
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
      const auto [p, q] = c.segment(i);
      if (std::abs(p.qx - q.qx) + std::abs(p.qy - q.qy) != 2) return "segment length";
      const SideProbe s = side_probe(p, q);
      if (!a.good_set_contains(s.left_x, s.left_y) || a.good_set_contains(s.right_x, s.right_y))
        return "orientation law";
    }
  }
  return "";
}

/// Runs the geometry property suite on n random scenes.
inline FuzzSummary fuzz_geometry(int n, std::uint64_t seed, int L = 10) {
  if (n < 1) throw ValidationError("n", "must be at least 1");
  std::mt19937_64 rng(seed);
  FuzzSummary out;
  for (int i = 0; i < n; ++i) {
    ++out.scenes;
    const ScenePair s = detail::random_scene(rng, L);
    auto fail = [&](const std::string& prop, const std::string& what) { out.failures.push_back({i, prop, what}); };
    auto check = [&](const std::string& prop, const std::function<void()>& body) {
      ++out.checks;
      try {
        body();
      } catch (const std::exception& e) {
        fail(prop, e.what());
      }
    };
    for (const auto* set : {&s.u, &s.v})
      check("good_set", [&] {
        const std::string msg = check_good_set(*set);
        if (!msg.empty()) throw Error(msg);
      });
    const GoodSet u(s.u), v(s.v);
    int total = 0;
    check("direct_equals_decomposed", [&] { total = intersection_number(u, v).total; });
    check("antisymmetry", [&] {
      const int c = intersection_number(u, GoodSet(s.v.complement())).total;
      if (c != -total) throw Error(std::to_string(c) + " vs " + std::to_string(-total));
    });
    check("u_additivity", [&] {
      int sum = 0;
      for (const auto& comp : connected_components(u)) sum += intersection_number_direct(comp.set, v).total;
      if (sum != total) throw Error(std::to_string(sum) + " vs " + std::to_string(total));
    });
    check("v_additivity", [&] {
      int sum = 0;
      for (const auto& comp : connected_components(v)) sum += intersection_number_direct(u, comp.set).total;
      if (sum != total) throw Error(std::to_string(sum) + " vs " + std::to_string(total));
    });
  }
  return out;
}

}  // namespace bec::geometry
