#include <catch_amalgamated.hpp>

#include "bec/spectral.hpp"

using namespace bec;
using Catch::Approx;

namespace {

OperatorMatrix diagonal(std::initializer_list<double> values) {
  OperatorMatrix h;
  h.window = BoxWindow(1, 1);
  h.entries.zeros(9, 9);
  int i = 0;
  for (double v : values) h.entries(i, i) = v, ++i;
  for (; i < 9; ++i) h.entries(i, i) = 10 + i;
  return h;
}

}  // namespace

TEST_CASE("diagonalization") {
  SECTION("identity") {
    OperatorMatrix h;
    h.window = BoxWindow(1, 2);
    h.entries = arma::eye<arma::cx_mat>(18, 18);
    const auto e = diagonalize(h);
    CHECK(arma::abs(e.values - 1).max() < 1e-14);
    CHECK(e.orthonormality_residual() < 1e-13);
  }
  SECTION("diagonal matrix") {
    const auto e = diagonalize(diagonal({1, 2, 3}));
    CHECK(e.values(0) == Approx(1));
    CHECK(e.values(1) == Approx(2));
    CHECK(e.values(2) == Approx(3));
  }
  SECTION("two-band model, reconstruction residual") {
    const OperatorMatrix h = build_qwz(3, BoxWindow(6, 2));
    const auto e = diagonalize(h);
    CHECK(e.reconstruction_residual(h) < 1e-10);
    CHECK(e.orthonormality_residual() < 1e-10);
  }
  SECTION("large window, where divide-and-conquer drivers can break") {
    const OperatorMatrix h = build_qwz(1, BoxWindow(12, 2));
    const auto e = diagonalize(h);
    CHECK(e.reconstruction_residual(h) < 1e-10);
    CHECK(e.orthonormality_residual() < 1e-10);
  }
  SECTION("non-Hermitian input") {
    OperatorMatrix h = diagonal({1, 2});
    h.entries(0, 1) = 1;
    CHECK_THROWS_AS(diagonalize(h), Error);
  }
}

TEST_CASE("Fermi projector") {
  const OperatorMatrix h = build_qwz(1, BoxWindow(10, 2));
  const auto e = diagonalize(h);
  SECTION("below and above the spectrum") {
    CHECK(arma::abs(fermi_projector(e, -10).matrix).max() == 0);
    const auto p = fermi_projector(e, 10);
    CHECK(arma::abs(p.matrix - arma::eye<arma::cx_mat>(e.dimension(), e.dimension())).max() < 1e-12);
  }
  SECTION("half filling") {
    const auto p = fermi_projector(e, 0);
    CHECK(p.occupied == e.dimension() / 2);
    CHECK(std::real(arma::trace(p.matrix)) == Approx(e.dimension() / 2.0));
    CHECK(p.idempotency_residual() < 1e-10);
    CHECK(p.hermiticity_residual() < 1e-10);
  }
  SECTION("lambda on an eigenvalue is rejected") {
    CHECK_THROWS_AS(fermi_projector(e, e.values(5)), ValidationError);
  }
}

TEST_CASE("smooth step profiles") {
  for (auto profile : {SmoothStep::Profile::Canonical, SmoothStep::Profile::Quintic}) {
    const SmoothStep rho(-0.5, 0.5, profile);
    INFO(profile_name(profile));
    CHECK(rho.rho(-0.6) == 0);
    CHECK(rho.rho(0.6) == 1);
    CHECK(rho.rho(0) == Approx(0.5));
    CHECK(rho.rho_prime(-0.5) == 0);
    CHECK(rho.rho_prime(0.7) == 0);
    CHECK(rho.derivative_integral() == Approx(1).epsilon(1e-8));
    // derivative against a centred difference
    for (double x : {-0.3, -0.1, 0.05, 0.4}) {
      const double h = 1e-6;
      CHECK(rho.rho_prime(x) == Approx((rho.rho(x + h) - rho.rho(x - h)) / (2 * h)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(SmoothStep(0.5, 0.5), ValidationError);
}

TEST_CASE("smooth derivative of an operator") {
  const SmoothStep rho(-0.5, 0.5);
  SECTION("spectrum outside the gap gives zero") {
    const OperatorMatrix h = build_qwz(3, BoxWindow(6, 2));
    CHECK(arma::abs(apply_smooth_derivative(diagonalize(h), rho)).max() < 1e-12);
  }
  SECTION("single eigenvalue at the gap midpoint") {
    const auto e = diagonalize(diagonal({0}));
    arma::cx_mat d = apply_smooth_derivative(e, rho);
    CHECK(std::real(d(0, 0)) == Approx(rho.rho_prime(0)));
    d(0, 0) = 0;
    CHECK(arma::abs(d).max() < 1e-14);
  }
  SECTION("glued operator: weight concentrated at the interface row") {
    const BoxWindow w(10, 2);
    const geometry::DiscreteSet up(10, geometry::TailSpec::half_plane(0, 1, 0));
    const OperatorMatrix he = build_edge_hamiltonian({build_qwz(1, w), build_qwz(3, w), up, {}});
    const auto e = diagonalize(he);
    const arma::cx_mat d = apply_smooth_derivative(e, rho);
    CHECK(arma::abs(d * he.entries - he.entries * d).max() < 1e-10);
    // diagonal weight per row x2, over the central columns |x1| <= 4
    std::vector<double> row(21, 0.0);
    for (std::size_t i = 0; i < w.dimension(); ++i) {
      const Site x = w.locate(i).first;
      if (std::abs(x.x1) <= 4) row[x.x2 + 10] += std::abs(d(i, i));
    }
    const double at_edge = std::max(row[10], row[11]);
    CHECK(at_edge > 0);
    CHECK(row[10 + 5] < 0.1 * at_edge);
    CHECK(row[10 - 5] < 0.1 * at_edge);
  }
}

TEST_CASE("Combes-Thomas resolvent bound") {
  const OperatorMatrix h = build_qwz(1, BoxWindow(6, 2));
  const auto r = resolvent_decay_check(h, cx(0, 0.5));
  CHECK(r.pass);
  CHECK_THROWS_AS(resolvent_decay_check(h, cx(0.3, 0)), ValidationError);
  OperatorMatrix d = h;
  d.entries = arma::diagmat(h.entries);
  const auto dr = resolvent_decay_check(d, cx(0, 0.5));
  CHECK(dr.pass);
  CHECK(dr.max_ratio <= 0.5);
  for (const auto& row : dr.rows)
    if (row.distance > 0) CHECK(row.max_entry == 0);
}

TEST_CASE("projector decay fits") {
  const geometry::DiscreteSet up(8, geometry::TailSpec::half_plane(0, 1, 0));
  const geometry::DiscreteSet right(8, geometry::TailSpec::half_plane(1, 0, 0));
  const auto e = diagonalize(build_qwz(1, BoxWindow(8, 2)));
  SECTION("zero projector") {
    const auto d = projector_decay_check(fermi_projector(e, -10), up, right, 3);
    CHECK(d.p.fitted_constant == 0);
    CHECK(d.pu.fitted_constant == 0);
    CHECK(d.k.fitted_constant == 0);
  }
  SECTION("identity projector") {
    const auto d = projector_decay_check(fermi_projector(e, 10), up, right, 3);
    CHECK(d.pu.fitted_constant == 0);
    CHECK(d.pv.fitted_constant == 0);
    CHECK(d.k.fitted_constant == 0);
  }
  SECTION("Fermi projector: finite constants") {
    const auto d = projector_decay_check(fermi_projector(e, 0), up, right, 1);
    CHECK(std::isfinite(d.p.fitted_constant));
    CHECK(d.p.fitted_constant > 0);
    CHECK(d.k.pass);
  }
  CHECK_THROWS_AS(projector_decay_check(fermi_projector(e, 0), up, right, -1), ValidationError);
}
