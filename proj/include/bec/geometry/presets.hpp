#pragma once

#include <string>
#include <utility>

#include "bec/geometry/discrete_set.hpp"

namespace bec::geometry {

enum class Preset { HalfPlanes, Fig1, Fig2A, Fig2B, Fig2C, Loop, TwoComponent };

inline const char* preset_name(Preset p) {
  switch (p) {
    case Preset::HalfPlanes: return "HALFPLANES";
    case Preset::Fig1: return "FIG1";
    case Preset::Fig2A: return "FIG2A";
    case Preset::Fig2B: return "FIG2B";
    case Preset::Fig2C: return "FIG2C";
    case Preset::Loop: return "LOOP";
    case Preset::TwoComponent: return "TWO_COMPONENT";
  }
  return "?";
}

inline Preset parse_preset(const std::string& name) {
  for (Preset p : {Preset::HalfPlanes, Preset::Fig1, Preset::Fig2A, Preset::Fig2B, Preset::Fig2C, Preset::Loop,
                   Preset::TwoComponent})
    if (name == preset_name(p)) return p;
  throw ValidationError("preset", "unknown preset '" + name + "'");
}

struct ScenePair {
  DiscreteSet u;
  DiscreteSet v;
  int expected_intersection = 0;
};

inline DiscreteSet from_tail(int L, const TailSpec& tail) { return DiscreteSet(L, tail); }

/// Window membership from the tail, with extra sites switched on by `extra`.
template <class Extra>
DiscreteSet tail_plus(int L, const TailSpec& tail, Extra extra) {
  return DiscreteSet::from_predicate(L, tail, [&](Site x) { return tail.contains(x) || extra(x); });
}

/// U and V of a named scene on the window |x|_inf <= L (L >= 9).
inline ScenePair preset_scene(Preset p, int L) {
  if (L < 9) throw ValidationError("L", "presets need a window half-width of at least 9");
  const TailSpec upper = TailSpec::half_plane(0, 1, 0);  // x2 > 0
  const TailSpec right = TailSpec::half_plane(1, 0, 0);  // x1 > 0
  switch (p) {
    case Preset::HalfPlanes:
      return {from_tail(L, upper), from_tail(L, right), 1};
    case Preset::Fig1: {
      // V: left half-plane with a hook whose bar ∂U crosses twice more
      const TailSpec left = TailSpec::half_plane(-1, 0, 0);  // x1 < 0
      auto hook = [](Site x) {
        return (x.x1 >= 0 && x.x1 <= 4 && x.x2 >= 3 && x.x2 <= 5) ||
               (x.x1 >= 2 && x.x1 <= 4 && x.x2 >= -3 && x.x2 <= 5);
      };
      return {from_tail(L, upper), tail_plus(L, left, hook), -1};
    }
    case Preset::Fig2A:
      // U: first and third quadrants; V1: wedge x1 > |x2| met by both boundary rays
      return {from_tail(L, TailSpec::quadrant(0b0101, 0, 0)),
              from_tail(L, TailSpec::wedge({1, -1, 0}, {1, 1, 0})), 1};
    case Preset::Fig2B:
      // same U; V2: wedge x2 < -|x1|
      return {from_tail(L, TailSpec::quadrant(0b0101, 0, 0)),
              from_tail(L, TailSpec::wedge({-1, -1, 0}, {1, -1, 0})), -1};
    case Preset::Fig2C:
      // U: vertical strip; V3: upper half-plane perpendicular to it
      return {from_tail(L, TailSpec::vstrip(-3, 3, true)), from_tail(L, upper), 0};
    case Preset::Loop: {
      auto blob = [](Site x) { return sup_norm(x) <= 2; };
      return {DiscreteSet::from_predicate(L, TailSpec::empty(), blob), from_tail(L, right), 0};
    }
    case Preset::TwoComponent: {
      const TailSpec high = TailSpec::half_plane(0, 1, 2);  // x2 > 2
      auto blob = [](Site x) { return std::abs(x.x1) <= 1 && x.x2 >= -5 && x.x2 <= -3; };
      return {tail_plus(L, high, blob), from_tail(L, right), 1};
    }
  }
  throw ValidationError("preset", "unhandled preset");
}

}  // namespace bec::geometry
