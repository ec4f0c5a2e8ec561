#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxsym/boundary.hpp"
#include "maxsym/geometry.hpp"
#include "maxsym/problem.hpp"
#include "maxsym/recovery.hpp"

using namespace maxsym;

namespace {

Metric3 embed(const Mat2& t) {
  Mat3 m = Mat3::Zero();
  m.topLeftCorner<2, 2>() = t;
  m(2, 2) = 1.0;
  return Metric3(m);
}

Covector3 random_covector(Rng& rng) {
  return Covector3(cplx(rng.sym(), rng.sym()), cplx(rng.sym(), rng.sym()),
                   cplx(rng.sym(), rng.sym()));
}

}  // namespace

TEST_CASE("impedance symbol: worked example") {
  // eps = I, xi~ = (1,0), F = e2, omega = 1  ->  i (1, 0, 0)
  const Covector3 lam = impedance_principal(Metric3::identity(),
                                            TangentialCovector(1.0, 0.0),
                                            Covector3(0.0, 1.0, 0.0), 1.0);
  CHECK((lam - Covector3(iu, 0.0, 0.0)).norm() <= 1e-15);
}

TEST_CASE("impedance symbol: wedge annihilates parallel data") {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Metric3 eps(random_spd3(rng));
    const TangentialCovector xi(rng.sym(), rng.sym() + 2.0);
    const cplx scale(rng.sym(), rng.sym());
    const Covector3 f(scale * xi(0), scale * xi(1), cplx(rng.sym(), rng.sym()));
    CHECK(impedance_principal(eps, xi, f, 1.0).norm() <= 1e-14);
  }
}

TEST_CASE("impedance symbol: homogeneous of degree one") {
  Rng rng(2);
  const Metric3 eps(random_spd3(rng));
  const Covector3 f = random_covector(rng);
  const TangentialCovector xi(0.7, -0.2);
  const Covector3 l1 = impedance_principal(eps, xi, f, 1.3);
  const Covector3 l2 = impedance_principal(eps, TangentialCovector(2.0 * xi), f, 1.3);
  CHECK((l2 - 2.0 * l1).norm() <= 1e-13 * l1.norm());
}

TEST_CASE("admittance symbol mirrors the impedance with opposite sign") {
  // mu = I mirrors the eps = I example with the sign flipped
  const Covector3 lam = admittance_principal(Metric3::identity(),
                                             TangentialCovector(1.0, 0.0),
                                             Covector3(0.0, 1.0, 0.0), 1.0);
  CHECK((lam - Covector3(-iu, 0.0, 0.0)).norm() <= 1e-15);

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Metric3 m(random_spd3(rng));
    const TangentialCovector xi(rng.sym() + 2.0, rng.sym());
    const Covector3 f = random_covector(rng);
    const Covector3 a = impedance_principal(m, xi, f, 1.0);
    const Covector3 b = admittance_principal(m, xi, f, 1.0);
    CHECK((a + b).norm() <= 1e-13 * a.norm());
  }
}

TEST_CASE("composition of the two boundary symbols vanishes") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Metric3 eps(random_spd3(rng));
    const Metric3 mu(random_spd3(rng));
    const double omega = 0.5 + rng.uniform();
    const TangentialCovector xi(std::cos(rng.uniform() * 6.28),
                                std::sin(rng.uniform() * 6.28));
    const Covector3 f = random_covector(rng);
    const Covector3 once = impedance_principal(eps, xi, f, omega);
    const Covector3 twice = admittance_principal(mu, xi, once, omega);
    CHECK(twice.norm() <= 1e-12 * std::max(1.0, once.norm()));
  }
}

TEST_CASE("field symbol H: divergence constraint and trace consistency") {
  Rng rng(5);
  int tested = 0;
  for (int i = 0; i < 100; ++i) {
    const ProblemInstance inst = make_instance(7000 + i, ProblemKind::Generic);
    const Metric3 eps = inst.eps_jet.value;
    const Metric3 mu = inst.mu_jet.value;
    const TangentialCovector xi(std::cos(rng.uniform() * 6.28),
                                std::sin(rng.uniform() * 6.28));
    const Covector3 f = random_covector(rng);
    FieldSymbol fs;
    try {
      fs = field_symbol_H(eps, mu, xi, f);
    } catch (const degenerate_error&) {
      continue;
    }
    ++tested;

    // reconstruction identity: value = a chi + b xi_mu by construction,
    // and the tangential trace reproduces the data
    const Vec2c trace(fs.value(0) - f(0), fs.value(1) - f(1));
    CHECK(trace.norm() <= 1e-10 * std::max(1.0, f.norm()));

    // principal symbol of the divergence equation annihilates H^(0)
    const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
    const Mat3c b1 = principal_B(s, xi);
    const cplx div = divergence_residual(mu, b1, xi, fs.value);
    const double scale = mu.mat().norm() * fs.value.norm() * (1.0 + b1.norm());
    CHECK(std::abs(div) <= 1e-10 * scale);
  }
  CHECK(tested >= 95);
}

TEST_CASE("field symbol H: independent 2x2 solve for the coefficients") {
  // ix H = F and the divergence constraint determine (a, b) uniquely; the
  // closed form must agree with that little linear system
  const ProblemInstance inst = make_instance(4242, ProblemKind::Generic);
  const Metric3 eps = inst.eps_jet.value;
  const Metric3 mu = inst.mu_jet.value;
  const TangentialCovector xi(0.8, 0.6);
  Rng rng(6);
  const Covector3 f = random_covector(rng);
  const FieldSymbol fs = field_symbol_H(eps, mu, xi, f);
  const JordanData jd = jordan_data(eps, mu, xi);
  Eigen::Matrix2cd a2;
  a2 << jd.chi(0), jd.xi_mu(0), jd.chi(1), jd.xi_mu(1);
  const Vec2c rhs(f(0), f(1));
  const Vec2c ab = a2.colPivHouseholderQr().solve(rhs);
  CHECK(std::abs(ab(0) - fs.a_coeff) <= 1e-10 * std::abs(fs.a_coeff));
  CHECK(std::abs(ab(1) - fs.b_coeff) <= 1e-10 * std::abs(fs.b_coeff));
}

TEST_CASE("field symbol H: parallel data kills the chi coefficient") {
  const ProblemInstance inst = make_instance(11, ProblemKind::Generic);
  const TangentialCovector xi(1.0, -0.5);
  const Covector3 f(xi(0), xi(1), 0.7);
  const FieldSymbol fs =
      field_symbol_H(inst.eps_jet.value, inst.mu_jet.value, xi, f);
  CHECK(std::abs(fs.a_coeff) <= 1e-14);
}

TEST_CASE("normal E symbol: closed form at G = xi~") {
  // first term drops (xi~ ^ xi~ = 0); the second evaluates in closed form
  const ProblemInstance inst = make_instance(21, ProblemKind::Generic);
  const Metric3 eps = inst.eps_jet.value;
  const Metric3 mu = inst.mu_jet.value;
  const Mat2 eps_t = tangential_block(eps);
  const Mat2 mu_t = tangential_block(mu);
  const TangentialCovector xi(0.9, 0.3);
  const Covector3 g(xi(0), xi(1), 0.0);
  const cplx e3 = normal_E_symbol(eps, mu, xi, g);

  const Vec2 perp = boundary_hodge_covector(xi, eps_t);
  // perp ^ xi~ = -(xi~ ^ perp) = -|xi|^2_eps dv_eps
  const cplx wedge = perp(0) * xi(1) - perp(1) * xi(0);
  CHECK(std::abs(wedge + xi.dot(eps_t * xi) / std::sqrt(eps_t.determinant())) <=
        1e-13);
  const cplx expect = -iu * std::sqrt(eps_t.determinant()) /
                      (std::sqrt(mu_t.determinant()) * std::sqrt(xi.dot(eps_t * xi))) *
                      wedge * std::sqrt(mu_t.determinant());
  CHECK(std::abs(e3 - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
}

TEST_CASE("normal E symbol agrees with the field-symbol route") {
  // spec example family: both metrics diagonal but distinct
  Mat2 et;
  et << 2.0, 0.0, 0.0, 3.0;
  const Metric3 eps = embed(et);
  const Metric3 mu(Mat3(Vec3(1.0, 2.0, 4.0).asDiagonal()));
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const TangentialCovector xi(std::cos(rng.uniform() * 6.28),
                                std::sin(rng.uniform() * 6.28));
    const Covector3 g = random_covector(rng);
    const cplx direct = normal_E_symbol(eps, mu, xi, g);
    const FieldSymbol fs = field_symbol_E(eps, mu, xi, g);
    CHECK(std::abs(direct - fs.value(2)) <=
          1e-11 * std::max(1.0, std::abs(fs.value(2))));
  }
  // and across generic instances
  for (int i = 0; i < 50; ++i) {
    const ProblemInstance inst = make_instance(900 + i, ProblemKind::Generic);
    const TangentialCovector xi(std::cos(rng.uniform() * 6.28),
                                std::sin(rng.uniform() * 6.28));
    const Covector3 g = random_covector(rng);
    const cplx direct =
        normal_E_symbol(inst.eps_jet.value, inst.mu_jet.value, xi, g);
    const FieldSymbol fs =
        field_symbol_E(inst.eps_jet.value, inst.mu_jet.value, xi, g);
    CHECK(std::abs(direct - fs.value(2)) <=
          1e-10 * std::max(1.0, std::abs(fs.value(2))));
  }
}

TEST_CASE("normal E symbol: degree zero in xi~") {
  const ProblemInstance inst = make_instance(33, ProblemKind::Generic);
  Rng rng(8);
  const Covector3 g = random_covector(rng);
  const TangentialCovector xi(0.6, 0.8);
  const cplx e1 = normal_E_symbol(inst.eps_jet.value, inst.mu_jet.value, xi, g);
  const cplx e2 = normal_E_symbol(inst.eps_jet.value, inst.mu_jet.value,
                                  TangentialCovector(3.0 * xi), g);
  CHECK(std::abs(e1 - e2) <= 1e-12 * std::abs(e1));
}

TEST_CASE("chart closed forms for the eigen-covector components") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const Mat2 eps_t = random_spd2(rng);
    const Mat2 mu_t = random_spd2(rng);
    NormalComponents nc{Vec2(rng.sym(), rng.sym()), 0.5 + rng.uniform()};
    const Metric3 eps = embed(eps_t);
    const Metric3 mu = assemble_mu_in_eps_chart(mu_t, nc);
    const double th = rng.uniform() * 6.28;
    const TangentialCovector xi(std::cos(th), std::sin(th));

    // roots in both charts
    CHECK(std::abs(positive_imag_root(eps, xi) - xi3_eps_in_eps(eps_t, xi)) <= 1e-13);
    CHECK(std::abs(positive_imag_root(mu, xi) - xi3_mu_in_eps(mu_t, nc, xi)) <= 1e-13);
    // transforming to mu-normal coordinates reproduces the mu-chart forms
    const BoundaryChart chart = to_boundary_normal(mu, eps);
    const Mat3 jt = chart.jacobian.inverse().transpose();
    const Covector3 xi_eps(xi(0), xi(1), positive_imag_root(eps, xi));
    const Covector3 moved = jt.cast<cplx>() * xi_eps;
    CHECK(std::abs(moved(2) - xi3_eps_in_mu(eps_t, nc, xi)) <= 1e-12);
    CHECK(std::abs(positive_imag_root(chart.companion_bnc, xi) -
                   xi3_eps_in_mu(eps_t, nc, xi)) <= 1e-12);
    const cplx in_mu_chart = xi3_mu_in_mu(mu_t, xi);
    CHECK(std::abs(positive_imag_root(Metric3(chart.jacobian * mu.mat() *
                                              chart.jacobian.transpose()),
                                      xi) -
                   in_mu_chart) <= 1e-12);

    // chi normal components: construction vs Lemma closed forms
    const Covector3 xi_mu(xi(0), xi(1), positive_imag_root(mu, xi));
    const Covector3 zeta =
        mu.inverse().mat().cast<cplx>() * eps.mat().cast<cplx>() * xi_mu;
    const cplx chi3 = star_wedge_upper(xi_mu, zeta, mu.mat())(2);
    CHECK(std::abs(chi3 - chi3_mu_in_eps(eps_t, mu_t, nc, xi)) <= 1e-11);

    const Covector3 zeta_e =
        eps.inverse().mat().cast<cplx>() * mu.mat().cast<cplx>() * xi_eps;
    const Covector3 chi_e = star_wedge_upper(xi_eps, zeta_e, eps.mat());
    const cplx chi_e_mu3 = (jt.cast<cplx>() * chi_e)(2);
    CHECK(std::abs(chi_e_mu3 - chi3_eps_in_mu(eps_t, mu_t, nc, xi)) <= 1e-11);
  }
}

TEST_CASE("cross-pair identity vanishes iff the normal data agree") {
  Rng rng(10);
  const auto grid = direction_grid(16);
  for (int i = 0; i < 50; ++i) {
    Mat2 eps_t = random_spd2(rng);
    Mat2 mu_t;
    do {
      mu_t = random_spd2(rng);
    } while (multiples_test(eps_t, mu_t, 1e-6).multiple);
    NormalComponents nc{Vec2(rng.sym(), rng.sym()), 0.5 + rng.uniform()};

    double self = 0.0, other = 0.0;
    NormalComponents nc2{Vec2(1.1 * nc.mu_n(0) + 0.05, 1.1 * nc.mu_n(1)),
                         nc.mu33 * 1.1};
    for (const auto& xi : grid) {
      self = std::max(self, boundary_pair_residual(eps_t, mu_t, nc, nc, xi));
      other = std::max(other, boundary_pair_residual(eps_t, mu_t, nc, nc2, xi));
    }
    CHECK(self <= 1e-10);
    CHECK(other >= 1e-4);
  }
}

TEST_CASE("gauge pair: boundary symbols agree at x3 = 0") {
  Rng rng(12);
  const ScalarField h = bump_field(0.5, Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.3));
  const GaugeMap gauge = build_gauge_map(h, 1.0, 1.5);
  const Metric3 eps_prime = embed(random_spd2(rng));
  const Metric3 mu_prime(random_spd3(rng));
  const auto pulled = pullback_parameters(
      [eps_prime](const Vec3&) { return eps_prime; },
      [mu_prime](const Vec3&) { return mu_prime; }, gauge);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x(rng.sym() * 0.4, rng.sym() * 0.4, 0.0);
    const TangentialCovector xi(std::cos(rng.uniform() * 6.28),
                                std::sin(rng.uniform() * 6.28));
    const Covector3 f = random_covector(rng);
    const Covector3 a = impedance_principal(pulled.eps_hat(x), xi, f, 1.0);
    const Covector3 b = impedance_principal(eps_prime, xi, f, 1.0);
    CHECK((a - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
    const Covector3 am = admittance_principal(pulled.mu_hat(x), xi, f, 1.0);
    const Covector3 bm = admittance_principal(mu_prime, xi, f, 1.0);
    CHECK((am - bm).norm() <= 1e-12 * std::max(1.0, bm.norm()));
  }
}

TEST_CASE("field symbols signal the degenerate basis") {
  const TangentialCovector xi(1.0, 0.0);
  CHECK_THROWS_AS(field_symbol_H(Metric3::identity(), Metric3::identity(), xi,
                                 Covector3(0.0, 1.0, 0.0)),
                  degenerate_error);
  CHECK_THROWS_AS(normal_E_symbol(Metric3::identity(), Metric3::identity(), xi,
                                  Covector3(0.0, 1.0, 0.0)),
                  degenerate_error);
}

TEST_CASE("boundary symbol rejects xi~ = 0 and omega <= 0") {
  CHECK_THROWS_AS(impedance_principal(Metric3::identity(), TangentialCovector(0, 0),
                                      Covector3(1, 0, 0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(impedance_principal(Metric3::identity(), TangentialCovector(1, 0),
                                      Covector3(1, 0, 0), 0.0),
                  std::invalid_argument);
}
