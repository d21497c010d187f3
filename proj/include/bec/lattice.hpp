#pragma once

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bec/geometry/boundary.hpp"
#include "bec/geometry/transversality.hpp"
#include "bec/report.hpp"
#include "bec/window.hpp"

namespace bec {

using cx = std::complex<double>;

/// Two-band Chern insulator with Bloch symbol
///   H(k) = sin k1 s1 + sin k2 s2 + (u + cos k1 + cos k2) s3,
/// gapped unless u is 0 or +-2. Chern number of the lower band: -sign(u) for 0 < |u| < 2.
struct QwzModel {
  double u = 1;

  arma::cx_mat22 symbol(double k1, double k2) const {
    const double d1 = std::sin(k1), d2 = std::sin(k2), d3 = u + std::cos(k1) + std::cos(k2);
    arma::cx_mat22 h;
    h(0, 0) = d3;
    h(1, 1) = -d3;
    h(0, 1) = cx(d1, -d2);
    h(1, 0) = cx(d1, d2);
    return h;
  }

  /// Upper band energy |d(k)|; the lower band is its negative.
  double band(double k1, double k2) const {
    const double d1 = std::sin(k1), d2 = std::sin(k2), d3 = u + std::cos(k1) + std::cos(k2);
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
  }
};

/// Dense operator on a window, with its claimed decay rate and, for translation
/// invariant bulk operators, the model it was built from.
struct OperatorMatrix {
  BoxWindow window{1, 1};
  arma::cx_mat entries;
  double nu = 0.3;
  std::optional<int> hop_range;
  std::optional<QwzModel> bulk;

  double hermiticity_residual() const {
    return entries.n_elem == 0 ? 0.0 : arma::abs(entries - entries.t()).max();
  }
  void check_hermitian(const std::string& what = "operator", double tol = 1e-12) const {
    if (entries.n_rows != window.dimension() || entries.n_cols != window.dimension())
      throw Error(what + ": matrix size does not match the window");
    if (hermiticity_residual() >= tol) throw Error(what + ": not Hermitian");
  }
};

struct GapSpec {
  double lambda = 0;
  double lower = -0.5;
  double upper = 0.5;

  void validate() const {
    if (!(lower < lambda && lambda < upper)) throw ValidationError("gap", "need lower < lambda < upper");
  }
  double midpoint() const { return 0.5 * (lower + upper); }
};

/// Open: hoppings stop at the window edge (sample-edge states appear for |u| < 2).
/// Periodic: the window is closed into a torus, whose spectrum is the bulk symbol
/// sampled at k = 2 pi n / (2L + 1); decay scans ignore the wrap-around.
enum class Boundary { Open, Periodic };

inline OperatorMatrix build_qwz(double u, const BoxWindow& window, Boundary boundary = Boundary::Open) {
  if (window.orbitals() != 2) throw ValidationError("orbitals", "the two-band model needs 2 orbitals per site");
  if (u == 0.0 || std::abs(u) == 2.0) throw ValidationError("u", "gapless mass");
  const int L = window.half_width();
  OperatorMatrix h;
  h.window = window;
  h.entries.zeros(window.dimension(), window.dimension());
  h.hop_range = 1;
  h.bulk = QwzModel{u};
  const cx I(0, 1);
  // hopping blocks T_d = H(x + e_d, x)
  const arma::cx_mat22 t1 = {{cx(0.5), 0.5 * I}, {0.5 * I, cx(-0.5)}};  // (s3 + i s1) / 2
  const arma::cx_mat22 t2 = {{cx(0.5), cx(0.5)}, {cx(-0.5), cx(-0.5)}};  // (s3 + i s2) / 2
  auto put = [&](Site to, Site from, const arma::cx_mat22& block) {
    const std::size_t r = window.index(to, 0), c = window.index(from, 0);
    h.entries.submat(r, c, r + 1, c + 1) = block;
    h.entries.submat(c, r, c + 1, r + 1) = block.t();
  };
  for (int x1 = -L; x1 <= L; ++x1)
    for (int x2 = -L; x2 <= L; ++x2) {
      const Site x{x1, x2};
      const std::size_t i = window.index(x, 0);
      h.entries(i, i) = u;
      h.entries(i + 1, i + 1) = -u;
      if (x1 < L) put({x1 + 1, x2}, x, t1);
      if (x2 < L) put({x1, x2 + 1}, x, t2);
      if (boundary == Boundary::Periodic && x1 == L) put({-L, x2}, x, t1);
      if (boundary == Boundary::Periodic && x2 == L) put({x1, -L}, x, t2);
    }
  return h;
}

/// Sites whose membership decides 1_U on the window, as a 0/1 vector over matrix indices.
inline arma::vec indicator(const geometry::DiscreteSet& set, const BoxWindow& window) {
  if (set.half_width() != window.half_width()) throw ValidationError("window", "set and operator windows differ");
  arma::vec v(window.dimension());
  for (std::size_t i = 0; i < window.dimension(); ++i) v(i) = set.member(window.locate(i).first) ? 1.0 : 0.0;
  return v;
}

struct EdgeGlueSpec {
  OperatorMatrix plus;
  OperatorMatrix minus;
  geometry::DiscreteSet region;
  std::optional<OperatorMatrix> extra;
};

/// H_e = 1_U H+ 1_U + 1_{U^c} H- 1_{U^c} + E.
inline OperatorMatrix build_edge_hamiltonian(const EdgeGlueSpec& spec) {
  if (!(spec.plus.window == spec.minus.window)) throw ValidationError("window", "H+ and H- windows differ");
  const BoxWindow& w = spec.plus.window;
  spec.plus.check_hermitian("H+");
  spec.minus.check_hermitian("H-");
  const arma::vec u = indicator(spec.region, w);
  const arma::vec uc = 1.0 - u;
  OperatorMatrix he;
  he.window = w;
  he.nu = std::min(spec.plus.nu, spec.minus.nu);
  he.entries = spec.plus.entries % arma::conv_to<arma::cx_mat>::from(u * u.t()) +
               spec.minus.entries % arma::conv_to<arma::cx_mat>::from(uc * uc.t());
  if (spec.plus.hop_range && spec.minus.hop_range) he.hop_range = std::max(*spec.plus.hop_range, *spec.minus.hop_range);
  if (spec.extra) {
    if (!(spec.extra->window == w)) throw ValidationError("extra", "window differs from H+");
    spec.extra->check_hermitian("E");
    he.entries += spec.extra->entries;
    he.hop_range.reset();
  }
  return he;
}

/// Largest operator norm of the site blocks A(x,y), per site pair.
inline double block_norm(const arma::cx_mat& a, const BoxWindow& w, Site x, Site y) {
  const int m = w.orbitals();
  const std::size_t r = w.index(x, 0), c = w.index(y, 0);
  if (m == 1) return std::abs(a(r, c));
  if (m == 2) {
    // s_max^2 = (F + sqrt(F^2 - 4 |det|^2)) / 2 with F the squared Frobenius norm
    const cx p = a(r, c), q = a(r, c + 1), s = a(r + 1, c), t = a(r + 1, c + 1);
    const double f = std::norm(p) + std::norm(q) + std::norm(s) + std::norm(t);
    const double det = std::abs(p * t - q * s);
    return std::sqrt(0.5 * (f + std::sqrt(std::max(0.0, f * f - 4 * det * det))));
  }
  return arma::norm(a.submat(r, c, r + m - 1, c + m - 1), 2);
}

/// Exhaustive scan of |H(x,y)| nu e^{2 nu d1(x,y)} over site pairs; pass iff <= 1.
inline DecayReport verify_esr(const OperatorMatrix& h, double nu) {
  if (!(nu > 0)) throw ValidationError("nu", "must be positive");
  const BoxWindow& w = h.window;
  DecayAccumulator acc("esr");
  for (std::size_t i = 0; i < w.site_count(); ++i)
    for (std::size_t j = 0; j < w.site_count(); ++j) {
      const Site x = w.site_at(i), y = w.site_at(j);
      const double e = block_norm(h.entries, w, x, y);
      const int d = l1_distance(x, y);
      acc.add(d, e, e * nu * std::exp(2 * nu * d), x, y);
    }
  return acc.finish();
}

/// |E(x,y)| <= nu^-1 e^{-2 nu d1(x, dU)} for a gluing perturbation E.
inline DecayReport verify_edge_perturbation(const OperatorMatrix& e, const geometry::DiscreteSet& region, double nu) {
  const BoxWindow& w = e.window;
  const geometry::GoodSet g(region);
  const auto segments = geometry::boundary_segments(geometry::good_set_boundary(g));
  std::vector<double> dist(w.site_count());
  for (std::size_t i = 0; i < w.site_count(); ++i) {
    const Site x = w.site_at(i);
    dist[i] = geometry::l1_distance_to({4 * x.x1, 4 * x.x2}, segments);
  }
  DecayAccumulator acc("edge_perturbation");
  for (std::size_t i = 0; i < w.site_count(); ++i)
    for (std::size_t j = 0; j < w.site_count(); ++j) {
      const Site x = w.site_at(i), y = w.site_at(j);
      const double v = block_norm(e.entries, w, x, y);
      acc.add(dist[i], v, v * nu * std::exp(2 * nu * dist[i]), x, y);
    }
  return acc.finish();
}

/// True iff no bulk eigenvalue lies in [lower - 1e-9, upper + 1e-9]. Operators carrying
/// a bulk model are checked on its symbol over a 256 x 256 k-grid; others by their
/// dense spectrum.
inline bool spectral_gap_check(const std::vector<const OperatorMatrix*>& ops, const GapSpec& gap,
                               int k_points = 256) {
  gap.validate();
  constexpr double margin = 1e-9;
  auto inside = [&](double e) { return e >= gap.lower - margin && e <= gap.upper + margin; };
  for (const OperatorMatrix* op : ops) {
    if (op->bulk) {
      for (int a = 0; a < k_points; ++a)
        for (int b = 0; b < k_points; ++b) {
          const double k1 = 2 * M_PI * a / k_points, k2 = 2 * M_PI * b / k_points;
          const double e = op->bulk->band(k1, k2);
          if (inside(e) || inside(-e)) return false;
        }
    } else {
      const arma::vec ev = arma::eig_sym(arma::cx_mat(op->entries));
      for (double e : ev)
        if (inside(e)) return false;
    }
  }
  return true;
}

// Matrix dumps: header (L, m, nu) followed by the entries in the frozen index order,
// row by row, as (re, im) pairs.

inline void write_matrix_binary(std::ostream& os, const OperatorMatrix& h) {
  const char magic[4] = {'B', 'E', 'C', 'M'};
  os.write(magic, 4);
  const std::int32_t L = h.window.half_width(), m = h.window.orbitals();
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&h.nu), sizeof h.nu);
  for (arma::uword r = 0; r < h.entries.n_rows; ++r)
    for (arma::uword c = 0; c < h.entries.n_cols; ++c) {
      const double pair[2] = {h.entries(r, c).real(), h.entries(r, c).imag()};
      os.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
}

inline void write_matrix_text(std::ostream& os, const OperatorMatrix& h) {
  os << "L,m,nu\n" << h.window.half_width() << ',' << h.window.orbitals() << ',' << csv_number(h.nu) << '\n';
  os << "row,col,re,im\n";
  for (arma::uword r = 0; r < h.entries.n_rows; ++r)
    for (arma::uword c = 0; c < h.entries.n_cols; ++c)
      os << r << ',' << c << ',' << csv_number(h.entries(r, c).real()) << ',' << csv_number(h.entries(r, c).imag())
         << '\n';
}

inline OperatorMatrix read_matrix_binary(std::istream& is) {
  char magic[4];
  std::int32_t L = 0, m = 0;
  double nu = 0;
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "BECM") throw Error("matrix dump: bad magic");
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  is.read(reinterpret_cast<char*>(&m), sizeof m);
  is.read(reinterpret_cast<char*>(&nu), sizeof nu);
  OperatorMatrix h;
  h.window = BoxWindow(L, m);
  h.nu = nu;
  const std::size_t n = h.window.dimension();
  h.entries.set_size(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double pair[2];
      is.read(reinterpret_cast<char*>(pair), sizeof pair);
      if (!is) throw Error("matrix dump: truncated");
      h.entries(r, c) = cx(pair[0], pair[1]);
    }
  return h;
}

inline OperatorMatrix read_matrix_text(std::istream& is) {
  std::string line;
  int L = 0, m = 0;
  double nu = 0;
  std::getline(is, line);
  if (line != "L,m,nu") throw Error("matrix dump: bad header");
  char comma;
  is >> L >> comma >> m >> comma >> nu;
  std::getline(is, line);
  std::getline(is, line);
  OperatorMatrix h;
  h.window = BoxWindow(L, m);
  h.nu = nu;
  const std::size_t n = h.window.dimension();
  h.entries.zeros(n, n);
  for (std::size_t k = 0; k < n * n; ++k) {
    std::size_t r = 0, c = 0;
    double re = 0, im = 0;
    if (!(is >> r >> comma >> c >> comma >> re >> comma >> im)) throw Error("matrix dump: truncated");
    if (r >= n || c >= n) throw Error("matrix dump: index out of range");
    h.entries(r, c) = cx(re, im);
  }
  return h;
}

}  // namespace bec
