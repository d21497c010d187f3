#include <catch_amalgamated.hpp>

#include <random>

#include "bec/geometry.hpp"
#include "oracles.hpp"

using namespace bec;
using namespace bec::geometry;

namespace {

DiscreteSet points(int L, std::initializer_list<Site> sites, TailSpec tail = TailSpec::empty()) {
  const std::vector<Site> list(sites);
  return DiscreteSet::from_predicate(L, tail, [&](Site x) {
    return tail.contains(x) || std::find(list.begin(), list.end(), x) != list.end();
  });
}

DiscreteSet square(int L, Site c, int r, bool inside) {
  return DiscreteSet::from_predicate(L, inside ? TailSpec::empty() : TailSpec::full(), [&](Site x) {
    return (std::max(std::abs(x.x1 - c.x1), std::abs(x.x2 - c.x2)) <= r) == inside;
  });
}

// Twice the signed area of a loop, in quarter units squared.
long shoelace(const BoundaryCurve& c) {
  long s = 0;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto [a, b] = c.segment(i);
    s += static_cast<long>(a.qx) * b.qy - static_cast<long>(b.qx) * a.qy;
  }
  return s;
}

std::set<oracle::Segment> library_segments(const std::vector<BoundaryCurve>& curves, int box) {
  std::set<oracle::Segment> out;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
      const auto [a, b] = c.segment(i);
      if (sup_norm(a) <= box && sup_norm(b) <= box) out.insert(oracle::make_segment(a.qx, a.qy, b.qx, b.qy));
    }
  return out;
}

void require_matches_oracle(const DiscreteSet& a) {
  const int box = 4 * a.half_width();
  const auto curves = oriented_boundary(GoodSet(a));
  REQUIRE(library_segments(curves, box) == oracle::boundary_segments(a, box));
  // left-orientation law: the 1/8-probe left of every segment midpoint is in A
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
      const auto [p, q] = c.segment(i);
      const int dx = (q.qx - p.qx) / 2, dy = (q.qy - p.qy) / 2;
      const long mx = p.qx + q.qx, my = p.qy + q.qy;  // midpoint in eighths
      REQUIRE(oracle::good_point(a, mx - dy, my + dx));
      REQUIRE_FALSE(oracle::good_point(a, mx + dy, my - dx));
    }
}

}  // namespace

TEST_CASE("tail predicates and complements") {
  const auto h = TailSpec::half_plane(0, 1, 0);
  CHECK(h.contains({5, 1}));
  CHECK_FALSE(h.contains({5, 0}));
  for (const auto& t : {h, TailSpec::quadrant(0b0101, 0, 0), TailSpec::vstrip(-3, 3, true),
                        TailSpec::wedge({1, -1, 0}, {1, 1, 0}), TailSpec::empty(), TailSpec::full()}) {
    const auto c = t.complement();
    for (int x1 = -6; x1 <= 6; ++x1)
      for (int x2 = -6; x2 <= 6; ++x2) REQUIRE(t.contains({x1, x2}) != c.contains({x1, x2}));
  }
  CHECK_THROWS_AS(TailSpec::half_plane(0, 0, 1), ValidationError);
  CHECK_THROWS_AS(TailSpec::vstrip(0, 1, true), ValidationError);
}

TEST_CASE("rim consistency is enforced") {
  DiscreteSet ok(9, TailSpec::half_plane(0, 1, 0));
  CHECK_NOTHROW(ok.validate());
  const auto bad = points(9, {{9, -9}}, TailSpec::half_plane(0, 1, 0));
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("good set membership on the 1/8 grid") {
  const auto a = points(9, {{0, 0}});
  for (long X = -16; X <= 16; ++X)
    for (long Y = -16; Y <= 16; ++Y) REQUIRE(a.good_set_contains(X, Y) == oracle::good_point(a, X, Y));
  // A ∩ Z^2 recovers the lattice set
  for (int x1 = -9; x1 <= 9; ++x1)
    for (int x2 = -9; x2 <= 9; ++x2) REQUIRE(a.good_set_contains(8 * x1, 8 * x2) == a.member({x1, x2}));
}

TEST_CASE("single site gives one loop through the four points (±1/4, ±1/4)") {
  const auto a = points(9, {{0, 0}});
  const auto curves = oriented_boundary(GoodSet(a));
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].kind == CurveKind::Loop);
  std::set<QuarterPoint> pts(curves[0].points.begin(), curves[0].points.end());
  CHECK(pts == std::set<QuarterPoint>{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(shoelace(curves[0]) > 0);
  require_matches_oracle(a);
}

TEST_CASE("empty set has no boundary") {
  CHECK(good_set_boundary(GoodSet(DiscreteSet(9))).empty());
  CHECK(good_set_boundary(GoodSet(DiscreteSet(9, TailSpec::full()))).empty());
}

TEST_CASE("boundary of the upper lattice half-plane is the line x2 = 3/4") {
  const DiscreteSet a(9, TailSpec::half_plane(0, 1, 0));
  const auto curves = oriented_boundary(GoodSet(a));
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].kind == CurveKind::Path);
  for (const auto& q : curves[0].points) {
    REQUIRE(q.qy == 3);
    REQUIRE((q.qx & 1) != 0);
  }
  // oriented in +x1 with the set on the left
  CHECK(curves[0].points.back().qx > curves[0].points.front().qx);
  REQUIRE(curves[0].head);
  REQUIRE(curves[0].tail);
  CHECK(curves[0].head->far_point.qx < 0);
  CHECK(curves[0].tail->far_point.qx > 0);
  require_matches_oracle(a);
}

TEST_CASE("loop orientation: counterclockwise around a square, clockwise around its complement") {
  const auto sq = square(9, {0, 0}, 1, true);
  const auto inner = oriented_boundary(GoodSet(sq));
  REQUIRE(inner.size() == 1);
  CHECK(shoelace(inner[0]) > 0);
  const auto outer = oriented_boundary(GoodSet(sq.complement()));
  REQUIRE(outer.size() == 1);
  CHECK(shoelace(outer[0]) < 0);
  require_matches_oracle(sq);
  require_matches_oracle(sq.complement());
}

TEST_CASE("boundaries match the brute-force oracle on every preset and random blobs") {
  for (auto p : {Preset::HalfPlanes, Preset::Fig1, Preset::Fig2A, Preset::Fig2B, Preset::Fig2C, Preset::Loop,
                 Preset::TwoComponent}) {
    const auto s = preset_scene(p, 10);
    require_matches_oracle(s.u);
    require_matches_oracle(s.v);
  }
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto blob = DiscreteSet::from_predicate(10, TailSpec::empty(), [&](Site x) {
      return sup_norm(x) <= 4 && (rng() % 3 != 0);
    });
    require_matches_oracle(blob);
  }
}

TEST_CASE("connected components agree with a flood fill") {
  SECTION("two distant points") {
    const auto a = points(9, {{-4, 0}, {4, 0}});
    const auto comps = connected_components(a);
    REQUIRE(comps.size() == 2);
    CHECK(oracle::site_components(a, 9) == 2);
    for (const auto& c : comps) {
      REQUIRE(c.curves.size() == 1);
      CHECK(c.curves[0].kind == CurveKind::Loop);
    }
  }
  SECTION("full plane") {
    const auto comps = connected_components(DiscreteSet(9, TailSpec::full()));
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].curves.empty());
  }
  SECTION("half-plane and a distant point") {
    const auto a = points(9, {{0, -5}}, TailSpec::half_plane(0, 1, 0));
    const auto comps = connected_components(a);
    REQUIRE(comps.size() == 2);
    CHECK(oracle::site_components(a, 9) == 2);
    std::multiset<CurveKind> kinds;
    for (const auto& c : comps) {
      REQUIRE(c.curves.size() == 1);
      kinds.insert(c.curves[0].kind);
    }
    CHECK(kinds == std::multiset<CurveKind>{CurveKind::Loop, CurveKind::Path});
  }
  SECTION("random blobs") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 30; ++k) {
      const auto a = DiscreteSet::from_predicate(9, TailSpec::empty(), [&](Site x) {
        return sup_norm(x) <= 5 && rng() % 2 == 0;
      });
      REQUIRE(connected_components(a).size() == static_cast<std::size_t>(oracle::site_components(a, 9)));
    }
  }
}

TEST_CASE("complement components") {
  SECTION("small square") {
    const auto comps = connected_components(square(9, {0, 0}, 1, true));
    REQUIRE(comps.size() == 1);
    const auto holes = complement_components(comps[0]);
    REQUIRE(holes.size() == 1);
    CHECK(holes[0].curves.size() == 1);
  }
  SECTION("upper half-plane") {
    const auto comps = connected_components(DiscreteSet(9, TailSpec::half_plane(0, 1, 0)));
    REQUIRE(comps.size() == 1);
    const auto holes = complement_components(comps[0]);
    REQUIRE(holes.size() == 1);
    REQUIRE(holes[0].curves.size() == 1);
    CHECK(holes[0].curves[0].kind == CurveKind::Path);
  }
  SECTION("plane minus two distant squares") {
    const auto a = DiscreteSet::from_predicate(9, TailSpec::full(), [](Site x) {
      return !(sup_norm(Site{x.x1 + 4, x.x2}) <= 1 || sup_norm(Site{x.x1 - 4, x.x2}) <= 1);
    });
    const auto comps = connected_components(a);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].curves.size() == 2);
    const auto holes = complement_components(comps[0]);
    REQUIRE(holes.size() == 2);
    for (const auto& h : holes) CHECK(h.curves.size() == 1);
  }
}

TEST_CASE("transversality diagnostic") {
  const DiscreteSet up(12, TailSpec::half_plane(0, 1, 0)), right(12, TailSpec::half_plane(1, 0, 0));
  CHECK(transversality_profile(up, right, 0.9).pass);
  CHECK_FALSE(transversality_profile(up, up, 0.1).pass);
  CHECK_THROWS_AS(transversality_profile(up, right, 0.0), ValidationError);
  for (auto p : {Preset::HalfPlanes, Preset::Fig1, Preset::Fig2A, Preset::Fig2B, Preset::Fig2C, Preset::Loop,
                 Preset::TwoComponent}) {
    const auto s = preset_scene(p, 15);
    const auto t = transversality_profile(s.u, s.v, 0.1);
    INFO(preset_name(p));
    CHECK(t.pass);
    CHECK(t.exponent_estimate >= 0.1);
  }
}

TEST_CASE("intersection numbers of simple scenes") {
  const DiscreteSet up(10, TailSpec::half_plane(0, 1, 0));
  const DiscreteSet right(10, TailSpec::half_plane(1, 0, 0)), left(10, TailSpec::half_plane(-1, 0, -1));
  CHECK(intersection_number(up, right).total == 1);
  CHECK(intersection_number(up, left).total == -1);
  const auto blob = square(10, {0, 0}, 2, true);
  CHECK(intersection_number(blob, right).total == 0);
  CHECK(intersection_number(blob, up).total == 0);
  const auto comps = connected_components(up);
  REQUIRE(comps.size() == 1);
  CHECK(intersection_number_simple(comps[0], GoodSet(right)) == 1);
}

TEST_CASE("intersection numbers of the preset scenes") {
  for (auto p : {Preset::HalfPlanes, Preset::Fig1, Preset::Fig2A, Preset::Fig2B, Preset::Fig2C, Preset::Loop,
                 Preset::TwoComponent}) {
    const auto s = preset_scene(p, 15);
    INFO(preset_name(p));
    const auto r = intersection_number(s.u, s.v);
    CHECK(r.method == IntersectionMethod::Verified);
    CHECK(r.total == s.expected_intersection);
  }
  CHECK(intersection_number(preset_scene(Preset::Fig1, 15).u, preset_scene(Preset::Fig1, 15).v).total == -1);
  const auto f2a = preset_scene(Preset::Fig2A, 15);
  CHECK(intersection_number(f2a.u, f2a.v).total == 1);
  CHECK(intersection_number(f2a.u, preset_scene(Preset::Fig2B, 15).v).total == -1);
}

TEST_CASE("two-component U against the full plane gives 0") {
  const auto s = preset_scene(Preset::TwoComponent, 12);
  CHECK(intersection_number(s.u, DiscreteSet(12, TailSpec::full())).total == 0);
}

TEST_CASE("antisymmetry under complementing V") {
  for (auto p : {Preset::HalfPlanes, Preset::Fig1, Preset::Fig2A, Preset::Fig2B, Preset::Fig2C}) {
    const auto s = preset_scene(p, 12);
    CHECK(intersection_number(s.u, s.v.complement()).total == -intersection_number(s.u, s.v).total);
  }
}

TEST_CASE("compact perturbations") {
  const DiscreteSet up(12, TailSpec::half_plane(0, 1, 0));
  const DiscreteSet right(12, TailSpec::half_plane(1, 0, 0));
  SECTION("empty patch is the identity") {
    CHECK(perturb_compactly(up, Patch{5, std::vector<std::uint8_t>(25, 0), {0, 0}}) == up);
  }
  SECTION("single flip next to the boundary") {
    std::vector<std::uint8_t> bits(1, 1);
    const auto p = perturb_compactly(up, Patch{1, bits, {3, 0}});
    int changed = 0;
    for (int x1 = -12; x1 <= 12; ++x1)
      for (int x2 = -12; x2 <= 12; ++x2) changed += p.member({x1, x2}) != up.member({x1, x2});
    CHECK(changed == 1);
    CHECK(p.member({3, 0}));
  }
  SECTION("random 5x5 patches straddling the boundary keep X") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
      std::vector<std::uint8_t> bits(25);
      for (auto& b : bits) b = rng() % 2;
      const int c1 = static_cast<int>(rng() % 13) - 6;
      const auto p = perturb_compactly(up, Patch{5, bits, {c1, 0}});
      CHECK(intersection_number(p, right).total == 1);
    }
  }
  SECTION("invalid patches") {
    CHECK_THROWS_AS(perturb_compactly(up, Patch{4, std::vector<std::uint8_t>(16, 0), {0, 0}}), ValidationError);
    CHECK_THROWS_AS(perturb_compactly(up, Patch{5, std::vector<std::uint8_t>(25, 0), {9, 0}}), ValidationError);
  }
}

TEST_CASE("geometry fuzzer") {
  const auto s = fuzz_geometry(60, 7);
  CHECK(s.scenes == 60);
  CHECK(s.checks > 0);
  for (const auto& f : s.failures) UNSCOPED_INFO(f.scene << " " << f.property << " " << f.detail);
  CHECK(s.failures.empty());
  const auto one = fuzz_geometry(1, 99), again = fuzz_geometry(1, 99);
  CHECK(one.checks == again.checks);
  CHECK(one.failures.size() == again.failures.size());
  CHECK_THROWS_AS(fuzz_geometry(0, 7), ValidationError);
}
