#pragma once

#include <armadillo>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bec/geometry.hpp"
#include "bec/lattice.hpp"
#include "bec/spectral.hpp"

namespace bec {

/// Conductances are reported as kappa times the raw trace, kappa = -2 pi, so that the
/// Hall conductance is the Chern number of the occupied band in the sign convention
/// of the plaquette (Wilson loop) oracle: -1 for u = 1.
inline constexpr double kConductanceUnit = -2 * std::numbers::pi;

/// Inner square |x - centre|_inf <= W of a window of half-width L; B = L - W.
struct TraceWindow {
  int W = 7;
  std::optional<Site> centre;

  void validate(int L) const {
    if (!(W > 0 && W < L)) throw ValidationError("W", "need 0 < W < L");
    if (L - W < 4) throw ValidationError("B", "buffer L - W must be at least 4");
  }
  int buffer(int L) const { return L - W; }
};

/// Per-site diagonal of an integrand summed over orbitals.
struct KernelField {
  BoxWindow window{1, 1};
  arma::vec values;  // real part, per site
  arma::vec imag;    // imaginary part, per site
  std::string label;

  double at(Site x) const { return values(window.site_index(x)); }
  double full_trace() const { return arma::accu(values); }
  double full_trace_imag() const { return arma::accu(imag); }

  /// Sum over |x - c|_inf <= W, in a fixed site order.
  double window_sum(Site c, int W, const arma::vec& v) const {
    double s = 0;
    for (std::size_t i = 0; i < window.site_count(); ++i) {
      const Site x = window.site_at(i);
      if (sup_norm({x.x1 - c.x1, x.x2 - c.x2}) <= W) s += v(i);
    }
    return s;
  }
  /// Sum of |k| over the ring W < |x - c|_inf <= W + 2.
  double ring_abs(Site c, int W) const {
    double s = 0;
    for (std::size_t i = 0; i < window.site_count(); ++i) {
      const Site x = window.site_at(i);
      const int r = sup_norm({x.x1 - c.x1, x.x2 - c.x2});
      if (r > W && r <= W + 2) s += std::abs(values(i));
    }
    return s;
  }

  void write_csv(std::ostream& os) const {
    os << "x1,x2,value\n";
    for (std::size_t i = 0; i < window.site_count(); ++i) {
      const Site x = window.site_at(i);
      os << x.x1 << ',' << x.x2 << ',' << csv_number(values(i)) << '\n';
    }
  }
};

namespace detail {

inline KernelField sum_orbitals(const BoxWindow& w, const arma::cx_vec& diag, std::string label) {
  KernelField f;
  f.window = w;
  f.label = std::move(label);
  f.values.zeros(w.site_count());
  f.imag.zeros(w.site_count());
  const int m = w.orbitals();
  for (std::size_t i = 0; i < diag.n_elem; ++i) {
    f.values(i / m) += diag(i).real();
    f.imag(i / m) += diag(i).imag();
  }
  return f;
}

// diag(A diag(v) B) without forming the product
inline arma::cx_vec diag_of_product(const arma::cx_mat& a, const arma::vec& v, const arma::cx_mat& b) {
  arma::cx_mat t = a;
  t.each_row() %= arma::conv_to<arma::cx_rowvec>::from(v.t());
  return arma::sum(t % b.st(), 1);
}

}  // namespace detail

/// Diagonal of -i K_{U,V}, K_{U,V} = P[[P,1_U],[P,1_V]] = PUPVP - PVPUP for a projector.
/// The two terms are formed independently, so the imaginary part measures how far P
/// is from an exact orthogonal projector.
inline KernelField kuv_diagonal(const SpectralProjector& proj, const arma::vec& u, const arma::vec& v) {
  const std::size_t n = proj.window.dimension();
  if (proj.matrix.n_rows != n || u.n_elem != n || v.n_elem != n) throw ValidationError("dimension", "mismatch");
  const arma::cx_mat& p = proj.matrix;
  arma::cx_mat pu = p;
  pu.each_row() %= arma::conv_to<arma::cx_rowvec>::from(u.t());
  arma::cx_mat pv = p;
  pv.each_row() %= arma::conv_to<arma::cx_rowvec>::from(v.t());
  const arma::cx_vec a = detail::diag_of_product(arma::cx_mat(pu * p), v, p);  // diag(PUP V P)
  const arma::cx_vec b = detail::diag_of_product(arma::cx_mat(pv * p), u, p);  // diag(PVP U P)
  return detail::sum_orbitals(proj.window, cx(0, -1) * (a - b), "K_UV");
}

inline KernelField kuv_diagonal(const SpectralProjector& proj, const geometry::DiscreteSet& u,
                                const geometry::DiscreteSet& v) {
  return kuv_diagonal(proj, indicator(u, proj.window), indicator(v, proj.window));
}

/// Diagonal of i rho'(H_e)[H_e, 1_V]: d(x) = i sum_y rho'(x,y) H(y,x) (V(x) - V(y)).
inline KernelField edge_diagonal(const arma::cx_mat& rho_prime, const OperatorMatrix& he, const arma::vec& v) {
  const std::size_t n = he.window.dimension();
  if (rho_prime.n_rows != n || v.n_elem != n) throw ValidationError("dimension", "mismatch");
  const arma::cx_mat prod = rho_prime % he.entries.st();  // (x,y) -> rho'(x,y) H(y,x)
  const arma::cx_vec vx = arma::conv_to<arma::cx_vec>::from(v);
  const arma::cx_vec d = cx(0, 1) * (vx % arma::sum(prod, 1) - prod * vx);
  return detail::sum_orbitals(he.window, d, "edge");
}

struct ConductanceReport {
  std::string quantity;
  double value = 0;
  double imag_residue = 0;
  TraceWindow window;
  double tail = 0;        // kappa-scaled sum of |k| over the ring just outside the window
  double full_trace = 0;  // unwindowed trace, vanishes by cyclicity
};

inline ConductanceReport windowed(const KernelField& f, const TraceWindow& tw, std::string quantity) {
  const Site c = tw.centre.value_or(Site{0, 0});
  ConductanceReport r;
  r.quantity = std::move(quantity);
  r.window = tw;
  r.window.centre = c;
  r.value = kConductanceUnit * f.window_sum(c, tw.W, f.values);
  r.imag_residue = std::abs(kConductanceUnit * f.window_sum(c, tw.W, f.imag));
  r.tail = std::abs(kConductanceUnit) * f.ring_abs(c, tw.W);
  r.full_trace = kConductanceUnit * f.full_trace();
  return r;
}

inline void reject_large_tail(const ConductanceReport& r, double limit = 0.1) {
  if (r.tail > limit)
    throw Error(r.quantity + ": tail estimate " + std::to_string(r.tail) + " exceeds " + std::to_string(limit) +
                " (window too small)");
}

/// Upper and right half-planes {x2 > 0}, {x1 > 0} on a window.
inline geometry::DiscreteSet upper_half_plane(int L) { return geometry::DiscreteSet(L, geometry::TailSpec::half_plane(0, 1, 0)); }
inline geometry::DiscreteSet right_half_plane(int L) { return geometry::DiscreteSet(L, geometry::TailSpec::half_plane(1, 0, 0)); }

/// Hall conductance -i Tr(P[[P,1_{x2>0}],[P,1_{x1>0}]]) in units of kappa, window centred at 0.
inline ConductanceReport hall_conductance(const SpectralProjector& proj, TraceWindow tw) {
  const int L = proj.window.half_width();
  tw.validate(L);
  if (!tw.centre) tw.centre = Site{0, 0};
  const KernelField f = kuv_diagonal(proj, upper_half_plane(L), right_half_plane(L));
  ConductanceReport r = windowed(f, tw, "hall");
  reject_large_tail(r);
  return r;
}

/// Centre of the trace window for a pair of sets: the site of smallest Psi_{U,V},
/// searched where the window (plus its tail ring) stays two sites inside the buffer.
inline Site locate_window_centre(const geometry::DiscreteSet& u, const geometry::DiscreteSet& v, int W) {
  const int L = u.half_width();
  const int limit = std::max(0, L - W - 6);
  const geometry::SeparationField field{geometry::GoodSet(u), geometry::GoodSet(v)};
  return geometry::argmin_separation(field, limit);
}

/// Transversality gate used before any geometric trace.
inline void require_transversal(const geometry::DiscreteSet& u, const geometry::DiscreteSet& v, double c) {
  const auto t = geometry::transversality_profile(u, v, c);
  if (!t.pass) throw Error("sets fail the transversality diagnostic at c = " + std::to_string(c));
}

inline TraceWindow resolve_window(TraceWindow tw, const geometry::DiscreteSet& u, const geometry::DiscreteSet& v) {
  if (!tw.centre) tw.centre = locate_window_centre(u, v, tw.W);
  return tw;
}

/// Geometric bulk conductance -i Tr(P[[P,1_U],[P,1_V]]).
inline ConductanceReport geometric_bulk_conductance(const SpectralProjector& proj, const geometry::DiscreteSet& u,
                                                    const geometry::DiscreteSet& v, TraceWindow tw,
                                                    double transversality_c = 0.1) {
  tw.validate(proj.window.half_width());
  require_transversal(u, v, transversality_c);
  tw = resolve_window(tw, u, v);
  ConductanceReport r = windowed(kuv_diagonal(proj, u, v), tw, "bulk_uv");
  reject_large_tail(r);
  return r;
}

/// Edge conductance i Tr(rho'(H_e)[H_e,1_V]) of the glued operator; the window is
/// located from (U, V) like the bulk one so both routes share it.
inline ConductanceReport edge_conductance(const OperatorMatrix& he, const EigenSystem& eig, const SmoothStep& rho,
                                          const geometry::DiscreteSet& u, const geometry::DiscreteSet& v,
                                          TraceWindow tw, double transversality_c = 0.1) {
  tw.validate(he.window.half_width());
  require_transversal(u, v, transversality_c);
  tw = resolve_window(tw, u, v);
  const KernelField f = edge_diagonal(apply_smooth_derivative(eig, rho), he, indicator(v, he.window));
  ConductanceReport r = windowed(f, tw, "edge");
  reject_large_tail(r);
  return r;
}

/// Unwindowed trace of an integrand (finite cyclicity: must vanish).
inline double full_trace_nullity(const KernelField& f) { return std::abs(kConductanceUnit * f.full_trace()); }

/// |sigma_b^{U,V} - sigma_b^{U',V}| on one shared window.
inline double robustness_delta(const SpectralProjector& proj, const geometry::DiscreteSet& u,
                               const geometry::DiscreteSet& u_perturbed, const geometry::DiscreteSet& v,
                               TraceWindow tw) {
  tw.validate(proj.window.half_width());
  tw = resolve_window(tw, u, v);
  const double a = windowed(kuv_diagonal(proj, u, v), tw, "bulk_uv").value;
  const double b = windowed(kuv_diagonal(proj, u_perturbed, v), tw, "bulk_uv").value;
  return std::abs(a - b);
}

/// {x2 > 0} for x1 <= n, bent by 45 degrees beyond: {x2 > x1 - n} for x1 > n.
inline geometry::DiscreteSet bent_half_plane(int L, int n) {
  using geometry::HalfPlane;
  const HalfPlane up{0, 1, 0}, left_of_n{-1, 0, -n - 1}, right_of_n{1, 0, n}, above_diag{-1, 1, -n};
  const auto tail = geometry::TailSpec::from_pieces({{up, left_of_n}, {above_diag, right_of_n}});
  return geometry::DiscreteSet(L, tail);
}

/// For each radius n: max over |x|_inf <= n/2 of |k_{U_n,V}(x) - k_{H2,H1}(x)| with U_n
/// the half-plane bent outside radius n and V the right half-plane.
inline std::vector<double> locality_convergence(const SpectralProjector& proj, const std::vector<int>& radii) {
  const int L = proj.window.half_width();
  const KernelField ref = kuv_diagonal(proj, upper_half_plane(L), right_half_plane(L));
  std::vector<double> out;
  for (int n : radii) {
    const KernelField f = kuv_diagonal(proj, bent_half_plane(L, n), right_half_plane(L));
    double dev = 0;
    for (std::size_t i = 0; i < f.window.site_count(); ++i)
      if (2 * sup_norm(f.window.site_at(i)) <= n)
        dev = std::max(dev, std::abs(kConductanceUnit * (f.values(i) - ref.values(i))));
    out.push_back(dev);
  }
  return out;
}

struct BecResidual {
  int intersection = 0;
  double edge = 0;
  double bulk_plus = 0, bulk_minus = 0;        // Hall conductances of P+ and P-
  double bulk_uv_plus = 0, bulk_uv_minus = 0;  // geometric bulk conductances on the same window
  double residual_intersection = 0;            // |edge - X (bulk_plus - bulk_minus)|
  double residual_equality = 0;                // |edge - (bulk_uv_plus - bulk_uv_minus)|
};

inline BecResidual bec_residual(int intersection, const ConductanceReport& edge, const ConductanceReport& hall_plus,
                                const ConductanceReport& hall_minus, const ConductanceReport& uv_plus,
                                const ConductanceReport& uv_minus) {
  BecResidual r;
  r.intersection = intersection;
  r.edge = edge.value;
  r.bulk_plus = hall_plus.value;
  r.bulk_minus = hall_minus.value;
  r.bulk_uv_plus = uv_plus.value;
  r.bulk_uv_minus = uv_minus.value;
  r.residual_intersection = std::abs(edge.value - intersection * (hall_plus.value - hall_minus.value));
  r.residual_equality = std::abs(edge.value - (uv_plus.value - uv_minus.value));
  return r;
}

}  // namespace bec
