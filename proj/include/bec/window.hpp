#pragma once

#include <compare>
#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace bec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when user-supplied configuration is invalid; names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct Site {
  int x1 = 0;
  int x2 = 0;
  friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

constexpr int l1_distance(Site a, Site b) {
  return std::abs(a.x1 - b.x1) + std::abs(a.x2 - b.x2);
}

constexpr int sup_norm(Site a) { return std::abs(a.x1) > std::abs(a.x2) ? std::abs(a.x1) : std::abs(a.x2); }

/// Square window { |x1| <= L, |x2| <= L } of Z^2 carrying m orbitals per site.
///
/// Matrix index order is frozen: row-major over (x1, x2), then orbital,
///   index = ((x1 + L) * (2L + 1) + (x2 + L)) * m + orbital.
class BoxWindow {
 public:
  BoxWindow(int half_width, int orbitals) : half_width_(half_width), orbitals_(orbitals) {
    if (half_width <= 0) throw ValidationError("half_width", "must be a positive integer");
    if (orbitals <= 0) throw ValidationError("orbitals", "must be a positive integer");
  }

  int half_width() const noexcept { return half_width_; }
  int orbitals() const noexcept { return orbitals_; }
  int side() const noexcept { return 2 * half_width_ + 1; }
  std::size_t site_count() const noexcept { return static_cast<std::size_t>(side()) * side(); }
  std::size_t dimension() const noexcept { return site_count() * orbitals_; }

  bool contains(Site s) const noexcept { return sup_norm(s) <= half_width_; }

  std::size_t site_index(Site s) const {
    if (!contains(s)) throw Error("site outside window");
    return static_cast<std::size_t>(s.x1 + half_width_) * side() + (s.x2 + half_width_);
  }
  Site site_at(std::size_t site_index) const {
    const int n = side();
    return {static_cast<int>(site_index / n) - half_width_, static_cast<int>(site_index % n) - half_width_};
  }
  std::size_t index(Site s, int orbital) const { return site_index(s) * orbitals_ + orbital; }
  std::pair<Site, int> locate(std::size_t matrix_index) const {
    return {site_at(matrix_index / orbitals_), static_cast<int>(matrix_index % orbitals_)};
  }

  friend bool operator==(const BoxWindow&, const BoxWindow&) = default;

 private:
  int half_width_;
  int orbitals_;
};

}  // namespace bec
