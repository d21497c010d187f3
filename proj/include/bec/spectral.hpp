#pragma once

#include <armadillo>
#include <lapacke.h>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bec/geometry/transversality.hpp"
#include "bec/lattice.hpp"
#include "bec/report.hpp"

namespace bec {

/// Full eigensystem of a Hermitian operator, eigenvalues ascending.
struct EigenSystem {
  arma::vec values;
  arma::cx_mat vectors;
  BoxWindow window{1, 1};

  std::size_t dimension() const { return values.n_elem; }

  double reconstruction_residual(const OperatorMatrix& h) const {
    const arma::cx_mat r = vectors * arma::diagmat(arma::conv_to<arma::cx_vec>::from(values)) * vectors.t();
    return arma::abs(r - h.entries).max();
  }
  double orthonormality_residual() const {
    return arma::abs(vectors.t() * vectors - arma::eye<arma::cx_mat>(dimension(), dimension())).max();
  }
};

/// Hermitian eigensolve through LAPACK's MRRR driver (zheevr). The divide-and-conquer
/// drivers of some reference LAPACK builds lose orthogonality at n ~ 1000.
inline EigenSystem diagonalize(const OperatorMatrix& h) {
  h.check_hermitian();
  EigenSystem e;
  e.window = h.window;
  const lapack_int n = static_cast<lapack_int>(h.entries.n_rows);
  arma::cx_mat a = 0.5 * (h.entries + h.entries.t());
  e.values.set_size(n);
  e.vectors.set_size(n, n);
  if (n == 0) return e;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, reinterpret_cast<lapack_complex_double*>(a.memptr()), n, 0,
                     0, 0, 0, 0, &found, e.values.memptr(),
                     reinterpret_cast<lapack_complex_double*>(e.vectors.memptr()), n, support.data());
  if (info != 0 || found != n) throw Error("eigendecomposition failed (zheevr info " + std::to_string(info) + ")");
  return e;
}

/// Fermi projector P = 1_(-inf, lambda)(H).
struct SpectralProjector {
  arma::cx_mat matrix;
  double lambda = 0;
  std::size_t occupied = 0;
  BoxWindow window{1, 1};

  double idempotency_residual() const { return arma::abs(matrix * matrix - matrix).max(); }
  double hermiticity_residual() const { return arma::abs(matrix - matrix.t()).max(); }
};

inline SpectralProjector fermi_projector(const EigenSystem& eig, double lambda) {
  for (double e : eig.values)
    if (std::abs(e - lambda) < 1e-9) throw ValidationError("lambda", "collides with an eigenvalue");
  SpectralProjector p;
  p.lambda = lambda;
  p.window = eig.window;
  p.occupied = static_cast<std::size_t>(arma::accu(eig.values < lambda));
  const std::size_t n = eig.dimension();
  if (p.occupied == 0) {
    p.matrix.zeros(n, n);
  } else if (p.occupied == n) {
    p.matrix.eye(n, n);
  } else {
    const arma::cx_mat q = eig.vectors.cols(0, p.occupied - 1);
    p.matrix = q * q.t();
  }
  return p;
}

/// Smooth switch rho from 0 below the gap to 1 above it.
///   Canonical: s(t) = f(t) / (f(t) + f(1 - t)), f(t) = exp(-1/t) for t > 0, C-infinity.
///   Quintic:   s(t) = 6t^5 - 15t^4 + 10t^3 clamped to [0, 1], only C^2.
class SmoothStep {
 public:
  enum class Profile { Canonical, Quintic };

  SmoothStep(double lower, double upper, Profile profile = Profile::Canonical)
      : lower_(lower), upper_(upper), profile_(profile) {
    if (!(lower < upper)) throw ValidationError("gap", "need lower < upper");
  }

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  Profile profile() const noexcept { return profile_; }

  double rho(double x) const {
    const double t = (x - lower_) / (upper_ - lower_);
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    if (profile_ == Profile::Quintic) return t * t * t * (10 + t * (-15 + 6 * t));
    const double a = f(t), b = f(1 - t);
    return a / (a + b);
  }

  double rho_prime(double x) const {
    const double t = (x - lower_) / (upper_ - lower_);
    if (t <= 0 || t >= 1) return 0;
    double ds = 0;
    if (profile_ == Profile::Quintic) {
      ds = 30 * t * t * (1 - t) * (1 - t);
    } else {
      const double a = f(t), b = f(1 - t);
      const double da = a / (t * t), db = b / ((1 - t) * (1 - t));
      ds = (da * b + a * db) / ((a + b) * (a + b));
    }
    return ds / (upper_ - lower_);
  }

  /// Simpson estimate of the integral of rho' over the gap (should be 1).
  double derivative_integral(int intervals = 10000) const {
    if (intervals % 2) ++intervals;
    const double h = (upper_ - lower_) / intervals;
    double s = rho_prime(lower_) + rho_prime(upper_);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4 : 2) * rho_prime(lower_ + i * h);
    return s * h / 3;
  }

 private:
  static double f(double t) { return t > 0 ? std::exp(-1 / t) : 0; }

  double lower_, upper_;
  Profile profile_;
};

inline const char* profile_name(SmoothStep::Profile p) {
  return p == SmoothStep::Profile::Canonical ? "canonical" : "quintic";
}

/// rho'(H) = sum_k rho'(e_k) v_k v_k^dagger, built from the eigenvectors with rho' != 0.
inline arma::cx_mat apply_smooth_derivative(const EigenSystem& eig, const SmoothStep& rho) {
  std::vector<arma::uword> idx;
  std::vector<double> w;
  for (arma::uword k = 0; k < eig.values.n_elem; ++k) {
    const double d = rho.rho_prime(eig.values(k));
    if (d != 0) {
      idx.push_back(k);
      w.push_back(d);
    }
  }
  const std::size_t n = eig.dimension();
  if (idx.empty()) return arma::cx_mat(n, n, arma::fill::zeros);
  const arma::cx_mat q = eig.vectors.cols(arma::uvec(idx));
  const arma::cx_mat qw = q * arma::diagmat(arma::conv_to<arma::cx_vec>::from(arma::vec(w)));
  return qw * q.t();
}

/// Combes-Thomas scan: |(H - z)^-1(x,y)| <= (2/|Im z|) exp(-c |Im z| d1(x,y)), c = nu^4/32.
inline DecayReport resolvent_decay_check(const OperatorMatrix& h, cx z) {
  const double eta = std::abs(z.imag());
  if (!(eta > 0 && eta < 1)) throw ValidationError("z", "need 0 < |Im z| < 1");
  const BoxWindow& w = h.window;
  const std::size_t n = w.dimension();
  const arma::cx_mat g = arma::inv(h.entries - z * arma::eye<arma::cx_mat>(n, n));
  const double c = std::pow(h.nu, 4) / 32;
  DecayAccumulator acc("combes_thomas");
  for (std::size_t i = 0; i < w.site_count(); ++i)
    for (std::size_t j = 0; j < w.site_count(); ++j) {
      const Site x = w.site_at(i), y = w.site_at(j);
      const int d = l1_distance(x, y);
      const double v = block_norm(g, w, x, y);
      acc.add(d, v, v / ((2 / eta) * std::exp(-c * eta * d)), x, y);
    }
  return acc.finish();
}

/// Per-site l1 distance to the boundary of a set (continuum boundary of its good set).
inline std::vector<double> boundary_distances(const geometry::DiscreteSet& set, const BoxWindow& w) {
  const auto segments =
      geometry::boundary_segments(geometry::good_set_boundary(geometry::GoodSet(set)));
  std::vector<double> d(w.site_count());
  for (std::size_t i = 0; i < w.site_count(); ++i) {
    const Site x = w.site_at(i);
    d[i] = geometry::l1_distance_to({4 * x.x1, 4 * x.x2}, segments);
  }
  return d;
}

inline arma::cx_mat commutator_with_indicator(const arma::cx_mat& p, const arma::vec& u) {
  // [P, 1_U] = P 1_U - 1_U P
  arma::cx_mat c = p;
  c.each_row() %= arma::conv_to<arma::cx_rowvec>::from(u.t());
  arma::cx_mat d = p;
  d.each_col() %= arma::conv_to<arma::cx_vec>::from(u);
  return c - d;
}

/// Fitted constants C_N of the projector kernel bounds, on the interior sites
/// |x|_inf <= L - interior_margin (sample-edge states excluded).
struct ProjectorDecay {
  int order = 0;
  DecayReport p, pu, pv, k;
};

inline ProjectorDecay projector_decay_check(const SpectralProjector& proj, const geometry::DiscreteSet& u,
                                            const geometry::DiscreteSet& v, int order, int interior_margin = 4) {
  if (order < 0) throw ValidationError("N", "must be nonnegative");
  const BoxWindow& w = proj.window;
  const arma::vec iu = indicator(u, w), iv = indicator(v, w);
  const arma::cx_mat cu = commutator_with_indicator(proj.matrix, iu);
  const arma::cx_mat cv = commutator_with_indicator(proj.matrix, iv);
  const arma::cx_mat kk = proj.matrix * (cu * cv - cv * cu);
  const auto du = boundary_distances(u, w), dv = boundary_distances(v, w);
  const int r = w.half_width() - interior_margin;
  const double n4 = 4.0 * order, n1 = order;
  auto lw = [](double d, double power) { return std::pow(1 + d, power); };

  DecayAccumulator ap("P"), au("[P,1_U]"), av("[P,1_V]"), ak("K_UV");
  for (std::size_t i = 0; i < w.site_count(); ++i) {
    const Site x = w.site_at(i);
    if (sup_norm(x) > r) continue;
    for (std::size_t j = 0; j < w.site_count(); ++j) {
      const Site y = w.site_at(j);
      if (sup_norm(y) > r) continue;
      const double dxy = l1_distance(x, y);
      auto add = [&](DecayAccumulator& acc, const arma::cx_mat& m, double weight) {
        const double e = block_norm(m, w, x, y);
        acc.add(dxy, e, e == 0 ? 0 : e * weight, x, y);
      };
      add(ap, proj.matrix, lw(dxy, n4));
      add(au, cu, lw(dxy, n4) * lw(du[i], n4) * lw(du[j], n4));
      add(av, cv, lw(dxy, n4) * lw(dv[i], n4) * lw(dv[j], n4));
      add(ak, kk, lw(dxy, n1) * lw(du[i], n1) * lw(dv[i], n1) * lw(du[j], n1) * lw(dv[j], n1));
    }
  }
  ProjectorDecay out;
  out.order = order;
  for (auto [acc, rep] : {std::pair{&ap, &out.p}, {&au, &out.pu}, {&av, &out.pv}, {&ak, &out.k}}) {
    *rep = acc->finish();
    rep->fitted_constant = rep->max_ratio;
    rep->pass = std::isfinite(rep->fitted_constant);
  }
  return out;
}

}  // namespace bec
