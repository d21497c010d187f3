#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bec/window.hpp"

namespace bec::geometry {

/// Integer half-plane { x in Z^2 : a . x > b }.
struct HalfPlane {
  int a1 = 0;
  int a2 = 0;
  long b = 0;

  bool contains(Site x) const noexcept { return static_cast<long>(a1) * x.x1 + static_cast<long>(a2) * x.x2 > b; }
  /// Lattice complement: a . x <= b  <=>  -a . x > -b - 1.
  HalfPlane negated() const noexcept { return {-a1, -a2, -b - 1}; }
  friend bool operator==(const HalfPlane&, const HalfPlane&) = default;
};

/// Intersection of half-planes (an empty list is the whole plane).
using Piece = std::vector<HalfPlane>;

/// Closed-form membership predicate for the sites outside a DiscreteSet's window.
///
/// Every tail is stored as a union of pieces, each an intersection of integer
/// half-planes; the kind and parameters are kept for serialization.
class TailSpec {
 public:
  enum class Kind { Empty, Full, HalfPlane, Quadrant, VStrip, Wedge, Pieces };

  static TailSpec empty() { return TailSpec(Kind::Empty, {}, {}); }
  static TailSpec full() { return TailSpec(Kind::Full, {}, {Piece{}}); }

  static TailSpec half_plane(int a1, int a2, long b) {
    if (a1 == 0 && a2 == 0) throw ValidationError("tail.half_plane", "normal vector must be nonzero");
    return TailSpec(Kind::HalfPlane, {a1, a2, b}, {Piece{HalfPlane{a1, a2, b}}});
  }

  /// Union of the quadrants selected by `mask` around the corner (c1, c2):
  /// bit 0: x1 > c1, x2 > c2; bit 1: x1 <= c1, x2 > c2;
  /// bit 2: x1 <= c1, x2 <= c2; bit 3: x1 > c1, x2 <= c2.
  /// The four quadrants partition Z^2, so the complement flips the mask.
  static TailSpec quadrant(unsigned mask, int c1, int c2) {
    if (mask > 15u) throw ValidationError("tail.quadrant", "mask must fit in 4 bits");
    const HalfPlane right{1, 0, c1};
    const HalfPlane up{0, 1, c2};
    const std::array<Piece, 4> quads = {Piece{right, up}, Piece{right.negated(), up},
                                        Piece{right.negated(), up.negated()}, Piece{right, up.negated()}};
    std::vector<Piece> pieces;
    for (unsigned q = 0; q < 4; ++q)
      if (mask & (1u << q)) pieces.push_back(quads[q]);
    return TailSpec(Kind::Quadrant, {static_cast<long>(mask), c1, c2}, std::move(pieces));
  }

  /// Vertical strip l < x1 < r (interior) or its complement x1 <= l or x1 >= r.
  static TailSpec vstrip(int l, int r, bool interior) {
    if (r - l < 2) throw ValidationError("tail.vstrip", "strip must contain at least one column (r - l >= 2)");
    const HalfPlane left_of_r{-1, 0, -r};  // x1 < r
    const HalfPlane right_of_l{1, 0, l};   // x1 > l
    std::vector<Piece> pieces;
    if (interior) {
      pieces.push_back(Piece{right_of_l, left_of_r});
    } else {
      pieces.push_back(Piece{right_of_l.negated()});
      pieces.push_back(Piece{left_of_r.negated()});
    }
    return TailSpec(Kind::VStrip, {l, r, interior ? 1 : 0}, std::move(pieces));
  }

  /// Intersection of two half-planes.
  static TailSpec wedge(HalfPlane first, HalfPlane second) {
    if ((first.a1 == 0 && first.a2 == 0) || (second.a1 == 0 && second.a2 == 0))
      throw ValidationError("tail.wedge", "normal vectors must be nonzero");
    return TailSpec(Kind::Wedge, {first.a1, first.a2, first.b, second.a1, second.a2, second.b},
                    {Piece{first, second}});
  }

  static TailSpec from_pieces(std::vector<Piece> pieces) {
    return TailSpec(Kind::Pieces, {}, std::move(pieces));
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<long>& params() const noexcept { return params_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  bool contains(Site x) const noexcept {
    return std::any_of(pieces_.begin(), pieces_.end(), [x](const Piece& p) {
      return std::all_of(p.begin(), p.end(), [x](const HalfPlane& h) { return h.contains(x); });
    });
  }

  static bool piece_contains(const Piece& p, Site x) noexcept {
    return std::all_of(p.begin(), p.end(), [x](const HalfPlane& h) { return h.contains(x); });
  }

  TailSpec complement() const {
    switch (kind_) {
      case Kind::Empty: return full();
      case Kind::Full: return empty();
      case Kind::HalfPlane: {
        const HalfPlane h = pieces_.front().front().negated();
        return half_plane(h.a1, h.a2, h.b);
      }
      case Kind::Quadrant:
        return quadrant(~static_cast<unsigned>(params_[0]) & 15u, static_cast<int>(params_[1]),
                        static_cast<int>(params_[2]));
      case Kind::VStrip:
        return vstrip(static_cast<int>(params_[0]), static_cast<int>(params_[1]), params_[2] == 0);
      default: break;
    }
    // De Morgan: not OR_i AND_j h_ij = AND_i OR_j not h_ij, distributed back into pieces.
    std::vector<Piece> result{Piece{}};
    for (const Piece& p : pieces_) {
      std::vector<Piece> next;
      for (const Piece& partial : result)
        for (const HalfPlane& h : p) {
          Piece extended = partial;
          const HalfPlane n = h.negated();
          if (std::find(extended.begin(), extended.end(), n) == extended.end()) extended.push_back(n);
          if (feasible(extended)) next.push_back(std::move(extended));
        }
      result = std::move(next);
    }
    if (result.empty()) return empty();
    if (std::any_of(result.begin(), result.end(), [](const Piece& p) { return p.empty(); })) return full();
    return from_pieces(std::move(result));
  }

  /// Every boundary line of the tail crosses the box [-r, r]^2.
  bool boundary_crosses_box(int r) const {
    for (const Piece& p : pieces_)
      for (const HalfPlane& h : p) {
        long lo = 0, hi = 0;
        bool first = true;
        for (int s1 : {-r, r})
          for (int s2 : {-r, r}) {
            const long v = static_cast<long>(h.a1) * s1 + static_cast<long>(h.a2) * s2;
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
          }
        if (!(lo <= h.b && h.b < hi)) return false;
      }
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::Empty: os << "EMPTY"; break;
      case Kind::Full: os << "FULL"; break;
      case Kind::HalfPlane: os << "HALF_PLANE"; break;
      case Kind::Quadrant: os << "QUADRANT"; break;
      case Kind::VStrip: os << "VSTRIP"; break;
      case Kind::Wedge: os << "WEDGE"; break;
      case Kind::Pieces: os << "PIECES"; break;
    }
    if (kind_ == Kind::VStrip) {
      os << ' ' << params_[0] << ' ' << params_[1] << ' ' << (params_[2] ? "interior" : "complement");
    } else if (kind_ == Kind::Pieces) {
      for (std::size_t i = 0; i < pieces_.size(); ++i) {
        os << (i ? " |" : "");
        for (const HalfPlane& h : pieces_[i]) os << ' ' << h.a1 << ' ' << h.a2 << ' ' << h.b;
      }
    } else {
      for (long v : params_) os << ' ' << v;
    }
    return os.str();
  }

  friend bool operator==(const TailSpec& a, const TailSpec& b) {
    return a.kind_ == b.kind_ && a.params_ == b.params_ && a.pieces_ == b.pieces_;
  }

 private:
  TailSpec(Kind kind, std::vector<long> params, std::vector<Piece> pieces)
      : kind_(kind), params_(std::move(params)), pieces_(std::move(pieces)) {}

  // Catches only the exactly opposite-normal contradiction; other empty pieces are harmless.
  static bool feasible(const Piece& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i].a1 == -p[j].a1 && p[i].a2 == -p[j].a2 && p[i].b + p[j].b >= -1) return false;
    return true;
  }

  Kind kind_;
  std::vector<long> params_;
  std::vector<Piece> pieces_;
};

/// Subset of Z^2: explicit membership on the window |x|_inf <= L, tail predicate outside.
class DiscreteSet {
 public:
  static constexpr int kRimBelt = 2;

  DiscreteSet(int half_width, TailSpec tail, std::vector<std::uint8_t> bits)
      : half_width_(half_width), tail_(std::move(tail)), bits_(std::move(bits)) {
    if (half_width <= 0) throw ValidationError("L", "window half-width must be positive");
    if (bits_.size() != static_cast<std::size_t>(side()) * side())
      throw ValidationError("membership", "grid size does not match the window");
  }

  /// Window membership copied from the tail predicate.
  explicit DiscreteSet(int half_width, TailSpec tail = TailSpec::empty())
      : DiscreteSet(from_predicate(half_width, tail, [&tail](Site x) { return tail.contains(x); })) {}

  static DiscreteSet from_predicate(int half_width, TailSpec tail, const std::function<bool(Site)>& inside) {
    const int n = 2 * half_width + 1;
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n) * n);
    for (int x1 = -half_width; x1 <= half_width; ++x1)
      for (int x2 = -half_width; x2 <= half_width; ++x2)
        bits[static_cast<std::size_t>(x1 + half_width) * n + (x2 + half_width)] = inside({x1, x2}) ? 1 : 0;
    return DiscreteSet(half_width, std::move(tail), std::move(bits));
  }

  int half_width() const noexcept { return half_width_; }
  int side() const noexcept { return 2 * half_width_ + 1; }
  const TailSpec& tail() const noexcept { return tail_; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  bool in_window(Site x) const noexcept { return sup_norm(x) <= half_width_; }

  bool member(Site x) const noexcept {
    if (in_window(x)) return bits_[offset(x)] != 0;
    return tail_.contains(x);
  }

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  /// Complement in Z^2 (membership and tail both flipped).
  DiscreteSet complement() const {
    std::vector<std::uint8_t> flipped(bits_.size());
    std::transform(bits_.begin(), bits_.end(), flipped.begin(), [](std::uint8_t b) { return b ? 0 : 1; });
    return DiscreteSet(half_width_, tail_.complement(), std::move(flipped));
  }

  /// Rim belt agrees with the tail and the tail's boundary lines cross the window core.
  void validate(const std::string& name = "set") const {
    const int core = half_width_ - kRimBelt;
    if (core < 1) throw ValidationError(name + ".L", "window too small for the rim belt");
    for (int x1 = -half_width_; x1 <= half_width_; ++x1)
      for (int x2 = -half_width_; x2 <= half_width_; ++x2) {
        const Site x{x1, x2};
        if (sup_norm(x) > core && member(x) != tail_.contains(x))
          throw ValidationError(name + ".tail", "membership at rim site (" + std::to_string(x1) + "," +
                                                    std::to_string(x2) + ") disagrees with the tail predicate");
      }
    if (!tail_.boundary_crosses_box(core))
      throw ValidationError(name + ".tail", "tail boundary lines must cross the window core");
  }

  /// Continuum membership in the good set {x : d_inf(x, Z^2 \ A) > 3/4}, evaluated
  /// straight from the definition at a point given in units of 1/8.
  bool good_set_contains(long X, long Y) const {
    const long lo1 = ceil_div(X - 6, 8), hi1 = floor_div(X + 6, 8);
    const long lo2 = ceil_div(Y - 6, 8), hi2 = floor_div(Y + 6, 8);
    for (long y1 = lo1; y1 <= hi1; ++y1)
      for (long y2 = lo2; y2 <= hi2; ++y2)
        if (!member({static_cast<int>(y1), static_cast<int>(y2)})) return false;
    return true;
  }

  friend bool operator==(const DiscreteSet& a, const DiscreteSet& b) {
    return a.half_width_ == b.half_width_ && a.tail_ == b.tail_ && a.bits_ == b.bits_;
  }

  static long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
  static long ceil_div(long a, long b) { return -floor_div(-a, b); }

 private:
  std::size_t offset(Site x) const noexcept {
    return static_cast<std::size_t>(x.x1 + half_width_) * side() + (x.x2 + half_width_);
  }

  int half_width_;
  TailSpec tail_;
  std::vector<std::uint8_t> bits_;
};

/// Square bit patch of odd side, centred on a site.
struct Patch {
  int size = 1;
  std::vector<std::uint8_t> bits;
  Site center;
};

/// XORs the patch into the window membership; the tail is unchanged.
inline DiscreteSet perturb_compactly(const DiscreteSet& set, const Patch& patch) {
  if (patch.size <= 0 || patch.size % 2 == 0) throw ValidationError("patch.size", "must be a positive odd integer");
  if (patch.bits.size() != static_cast<std::size_t>(patch.size) * patch.size)
    throw ValidationError("patch.bits", "grid size does not match the patch side");
  const int h = patch.size / 2;
  const int core = set.half_width() - DiscreteSet::kRimBelt;
  if (std::abs(patch.center.x1) + h > core || std::abs(patch.center.x2) + h > core)
    throw ValidationError("patch", "patch touches the rim belt");
  std::vector<std::uint8_t> bits = set.bits();
  const int L = set.half_width();
  for (int i = 0; i < patch.size; ++i)
    for (int j = 0; j < patch.size; ++j) {
      if (!patch.bits[static_cast<std::size_t>(i) * patch.size + j]) continue;
      const Site x{patch.center.x1 + i - h, patch.center.x2 + j - h};
      auto& b = bits[static_cast<std::size_t>(x.x1 + L) * set.side() + (x.x2 + L)];
      b = b ? 0 : 1;
    }
  return DiscreteSet(L, set.tail(), std::move(bits));
}

}  // namespace bec::geometry
