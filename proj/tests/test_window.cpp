#include <catch_amalgamated.hpp>

#include "bec/window.hpp"

using namespace bec;

TEST_CASE("window index bijection round-trips") {
  const BoxWindow w(3, 2);
  REQUIRE(w.dimension() == 98);
  for (std::size_t i = 0; i < w.dimension(); ++i) {
    const auto [s, o] = w.locate(i);
    REQUIRE(w.index(s, o) == i);
  }
  CHECK(w.index({-3, -3}, 0) == 0);
  CHECK(w.index({-3, -2}, 1) == 3);
  CHECK(w.index({-2, -3}, 0) == 14);
}

TEST_CASE("window rejects invalid sizes and outside sites") {
  CHECK_THROWS_AS(BoxWindow(0, 2), ValidationError);
  CHECK_THROWS_AS(BoxWindow(2, 0), ValidationError);
  const BoxWindow w(2, 1);
  CHECK_THROWS_AS(w.site_index({3, 0}), Error);
  CHECK(w.contains({-2, 2}));
  CHECK_FALSE(w.contains({0, -3}));
}

TEST_CASE("validation errors name the field") {
  try {
    BoxWindow(-1, 2);
    FAIL("expected a throw");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "half_width");
  }
}

TEST_CASE("lattice distances") {
  CHECK(l1_distance({1, -2}, {-1, 3}) == 7);
  CHECK(sup_norm(Site{-4, 3}) == 4);
}
