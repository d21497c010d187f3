#pragma once

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bec/window.hpp"

namespace bec {

/// Fixed CSV number formatting: 17 significant digits, so values round-trip bit-exactly.
inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Largest ratio |A(x,y)| / bound(x,y) found at one distance.
struct DecayRow {
  double distance = 0;
  double max_entry = 0;
  double max_ratio = 0;
};

/// Outcome of an exhaustive scan of a kernel against a decay bound.
struct DecayReport {
  std::string bound;
  double max_ratio = 0;
  Site witness_x{};
  Site witness_y{};
  bool pass = true;
  double fitted_constant = std::numeric_limits<double>::quiet_NaN();  // set by constant fits only
  std::vector<DecayRow> rows;  // sorted by distance

  void finish(double tolerance = 1e-12) { pass = max_ratio <= 1.0 + tolerance; }

  void write_csv(std::ostream& os, bool header = true) const {
    if (header) os << "bound,distance,max_entry,max_ratio\n";
    for (const auto& r : rows)
      os << bound << ',' << csv_number(r.distance) << ',' << csv_number(r.max_entry) << ',' << csv_number(r.max_ratio)
         << '\n';
  }
};

/// Accumulates per-distance maxima while scanning pairs.
class DecayAccumulator {
 public:
  explicit DecayAccumulator(std::string bound) { report_.bound = std::move(bound); }

  void add(double distance, double entry, double ratio, Site x, Site y) {
    DecayRow& r = rows_[distance];
    r.distance = distance;
    r.max_entry = std::max(r.max_entry, entry);
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > report_.max_ratio) {
      report_.max_ratio = ratio;
      report_.witness_x = x;
      report_.witness_y = y;
    }
  }

  DecayReport finish(double tolerance = 1e-12) {
    for (auto& [d, r] : rows_) report_.rows.push_back(r);
    report_.finish(tolerance);
    return report_;
  }

 private:
  DecayReport report_;
  std::map<double, DecayRow> rows_;
};

}  // namespace bec
