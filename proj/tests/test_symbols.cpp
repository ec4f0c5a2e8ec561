#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "maxsym/problem.hpp"
#include "maxsym/symbols.hpp"

using namespace maxsym;

namespace {

// Independent route to the principal part: the operator symbol written with
// the full covector xi = (xi~, xi3) in one expression,
//   M(xi)_l^k = rho (eps^{-1})_{lq} (mu xi)^q (mu xi)^k
//               + delta_l^k |xi|^2_eps - xi_l (eps xi)^k.
// Splitting by powers of xi3 must reproduce T, A, Q.
Mat3c m_full(const Metric3& eps, const Metric3& mu, const Covector3& xi) {
  const double rho = std::sqrt(eps.det() / mu.det());
  const Mat3c eps_inv = eps.inverse().mat().cast<cplx>();
  const Covector3 mu_xi = mu.mat().cast<cplx>() * xi;
  const Covector3 eps_xi = eps.mat().cast<cplx>() * xi;
  const cplx xi2 = bilinear_form(xi, xi, eps);
  Mat3c m = Mat3c::Zero();
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      cplx v = 0.0;
      for (int q = 0; q < 3; ++q) v += rho * eps_inv(l, q) * mu_xi(q) * mu_xi(k);
      if (l == k) v += xi2;
      v -= xi(l) * eps_xi(k);
      m(l, k) = v;
    }
  return m;
}

MetricJet bnc_jet(const Mat2& eps_t) {
  Mat3 m = Mat3::Zero();
  m.topLeftCorner<2, 2>() = eps_t;
  m(2, 2) = 1.0;
  return MetricJet::constant(Metric3(m));
}

ProblemInstance generic_instance(std::uint64_t seed) {
  return make_instance(seed, ProblemKind::Generic);
}

double chain_scale(const SymbolSet& s, const TangentialCovector& xi) {
  return s.T().norm() + s.A(xi).norm() + s.Q(xi).norm();
}

}  // namespace

TEST_CASE("coefficient symbols match the full-covector route") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const Metric3 eps(random_spd3(rng));
    const Metric3 mu(random_spd3(rng));
    const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(mu), 1.0);
    const TangentialCovector xit(rng.sym(), rng.sym());
    const cplx xi3(rng.sym(), rng.sym());
    const Covector3 xi(xit(0), xit(1), xi3);
    const Mat3c direct = m_full(eps, mu, xi);
    const Mat3c split = matrix_polynomial(s, xit, xi3);
    CHECK((direct - split).norm() <= 1e-12 * std::max(1.0, direct.norm()));
  }
}

TEST_CASE("identity metrics give the expected T") {
  const SymbolSet s(bnc_jet(Mat2::Identity()),
                    MetricJet::constant(Metric3::identity()), 1.0);
  CHECK((s.T() - Mat3c::Identity()).norm() <= 1e-14);
}

TEST_CASE("homogeneity of A, Q and F in xi~") {
  const ProblemInstance inst = generic_instance(3);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const TangentialCovector xi(rng.sym(), rng.sym());
    CHECK((s.A(2.0 * xi) - 2.0 * s.A(xi)).norm() <= 1e-12 * s.A(xi).norm());
    CHECK((s.Q(2.0 * xi) - 4.0 * s.Q(xi)).norm() <= 1e-12 * s.Q(xi).norm());
    CHECK((s.F(2.0 * xi) - 2.0 * s.F(xi)).norm() <=
          1e-12 * std::max(1.0, s.F(xi).norm()));
  }
}

TEST_CASE("constant metrics kill the derivative symbols") {
  Rng rng(23);
  const Metric3 eps(random_spd3(rng));
  const Metric3 mu(random_spd3(rng));
  const double omega = 1.7;
  const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(mu), omega);
  CHECK(s.G().norm() == 0.0);
  CHECK(s.F(TangentialCovector(1.0, -0.4)).norm() == 0.0);
  const Mat3c r_expect = -omega * omega * std::sqrt(eps.det() / mu.det()) *
                         (eps.inverse().mat() * mu.mat()).cast<cplx>();
  CHECK((s.R() - r_expect).norm() <= 1e-13 * r_expect.norm());
}

TEST_CASE("matrix polynomial at xi3 = 0 is Q") {
  const ProblemInstance inst = generic_instance(9);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xi(1.0, 0.0);
  CHECK((matrix_polynomial(s, xi, 0.0) - s.Q(xi)).norm() == 0.0);
}

TEST_CASE("det M has the closed product form") {
  // det M(xi) = rho |xi|^2_eps |xi|^4_mu, exercised at complex xi3
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const Metric3 eps(random_spd3(rng));
    const Metric3 mu(random_spd3(rng));
    const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(mu), 1.0);
    const TangentialCovector xit(rng.sym(), rng.sym());
    const cplx xi3(rng.sym(), rng.sym());
    const Covector3 xi(xit(0), xit(1), xi3);
    const cplx det = matrix_polynomial(s, xit, xi3).determinant();
    const cplx e2 = bilinear_form(xi, xi, eps);
    const cplx m2 = bilinear_form(xi, xi, mu);
    const cplx expect = std::sqrt(eps.det() / mu.det()) * e2 * m2 * m2;
    CHECK(std::abs(det - expect) <= 1e-11 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("identity metrics make i|xi~| a root of det M") {
  const SymbolSet s(bnc_jet(Mat2::Identity()),
                    MetricJet::constant(Metric3::identity()), 1.0);
  const TangentialCovector xi(1.0, 0.0);
  const cplx det = matrix_polynomial(s, xi, iu).determinant();
  CHECK(std::abs(det) <= 1e-14);
}

TEST_CASE("eigenvalue closed forms") {
  Mat2 eps_t;
  eps_t << 2.0, 0.0, 0.0, 3.0;
  Mat3 eps3 = Mat3::Zero();
  eps3.topLeftCorner<2, 2>() = eps_t;
  eps3(2, 2) = 1.0;
  const TangentialCovector xi(1.0, 0.0);
  CHECK(std::abs(positive_imag_root(Metric3(eps3), xi) - iu * std::sqrt(2.0)) <=
        1e-15);

  // mu with mu^{33} = 4, mu^{13} = 2 over tangential block I: root -1/2 + i/2
  Mat3 mu3;
  mu3 << 2.0, 0.0, 2.0, 0.0, 1.0, 0.0, 2.0, 0.0, 4.0;  // mu~ = I after Schur
  const cplx root = positive_imag_root(Metric3(mu3), xi);
  CHECK(std::abs(root - cplx(-0.5, 0.5)) <= 1e-15);

  // both roots annihilate the respective quadratic form
  const Covector3 xi_mu(1.0, 0.0, root);
  CHECK(std::abs(bilinear_form(xi_mu, xi_mu, Metric3(mu3))) <= 1e-14);
}

TEST_CASE("roots substituted into the eigenvalue polynomial") {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const ProblemInstance inst =
        generic_instance(static_cast<std::uint64_t>(rng.uniform() * 1e6));
    const double th = rng.uniform() * 6.283185307;
    const TangentialCovector xi(std::cos(th), std::sin(th));
    const auto [xe, xm] = eigenvalues(inst.eps_jet.value, inst.mu_jet.value, xi);
    const Covector3 full_e(xi(0), xi(1), xe);
    const Covector3 full_m(xi(0), xi(1), xm);
    CHECK(std::abs(bilinear_form(full_e, full_e, inst.eps_jet.value)) <= 1e-12);
    CHECK(std::abs(bilinear_form(full_m, full_m, inst.mu_jet.value)) <= 1e-12);
    const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
    CHECK(std::abs(matrix_polynomial(s, xi, xe).determinant()) <= 1e-10);
    CHECK(std::abs(matrix_polynomial(s, xi, xm).determinant()) <= 1e-10);
  }
}

TEST_CASE("xi~ = 0 rejected") {
  CHECK_THROWS_AS(positive_imag_root(Metric3::identity(), TangentialCovector(0, 0)),
                  std::invalid_argument);
}

TEST_CASE("jordan chain residuals at the worked example") {
  // eps = blockdiag(I, 1), mu = diag(1, 1, 4), xi~ = (1, 0)
  const Metric3 eps = Metric3::identity();
  const Metric3 mu(Mat3(Vec3(1.0, 1.0, 4.0).asDiagonal()));
  const TangentialCovector xi(1.0, 0.0);
  const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(mu), 1.0);
  const JordanData jd = jordan_data(eps, mu, xi);
  const double scale = chain_scale(s, xi);

  CHECK((matrix_polynomial(s, xi, jd.xi_eps3) * jd.chi).norm() <= 1e-11 * scale);
  CHECK((matrix_polynomial(s, xi, jd.xi_mu3) * jd.xi_mu).norm() <= 1e-11 * scale);
  // generalised eigenvector: M(xi_mu3) gamma + M'(xi_mu3) xi_mu = 0
  const Mat3c mprime = 2.0 * jd.xi_mu3 * s.T() + s.A(xi);
  CHECK((matrix_polynomial(s, xi, jd.xi_mu3) * jd.gamma + mprime * jd.xi_mu).norm() <=
        1e-10 * scale);
  // chi is eps-orthogonal to the eigen-covector it came from
  const Covector3 xi_eps(xi(0), xi(1), jd.xi_eps3);
  CHECK(std::abs(bilinear_form(jd.chi, xi_eps, eps)) <= 1e-13);
}

TEST_CASE("jordan chain residual sweep") {
  Rng rng(2024);
  int tested = 0;
  for (int i = 0; i < 500; ++i) {
    const Metric3 eps(random_spd3(rng));
    const Metric3 mu(random_spd3(rng));
    const double th = rng.uniform() * 6.283185307;
    const TangentialCovector xi(std::cos(th), std::sin(th));
    const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(mu), 1.0);
    JordanData jd;
    try {
      jd = jordan_data(eps, mu, xi);
    } catch (const degenerate_error&) {
      continue;
    }
    ++tested;
    const double scale = chain_scale(s, xi);
    CHECK((matrix_polynomial(s, xi, jd.xi_eps3) * jd.chi).norm() / jd.chi.norm() <=
          1e-9 * scale);
    CHECK((matrix_polynomial(s, xi, jd.xi_mu3) * jd.xi_mu).norm() / jd.xi_mu.norm() <=
          1e-9 * scale);
    const Mat3c mprime = 2.0 * jd.xi_mu3 * s.T() + s.A(xi);
    CHECK((matrix_polynomial(s, xi, jd.xi_mu3) * jd.gamma + mprime * jd.xi_mu).norm() /
              std::max(jd.gamma.norm(), 1.0) <=
          1e-9 * scale);
  }
  CHECK(tested > 450);
}

TEST_CASE("jordan B: spectrum and quadratic residual") {
  const ProblemInstance inst = generic_instance(77);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xi(0.6, -0.8);
  const JordanData jd = jordan_data(s.eps_metric(), s.mu_metric(), xi);
  const Mat3c b = principal_B_jordan(jd);

  // the multiset {xi_eps3, xi_mu3, xi_mu3} with multiplicity: certified by
  // the annihilating polynomial, which is immune to the defective double
  // root's square-root sensitivity under eigensolvers
  const Mat3c id = Mat3c::Identity();
  const Mat3c annihil =
      (b - jd.xi_eps3 * id) * (b - jd.xi_mu3 * id) * (b - jd.xi_mu3 * id);
  const double scale = std::pow(std::max({b.norm(), 1.0}), 3);
  CHECK(annihil.norm() <= 1e-10 * scale);

  // eigensolver roots still land within the defective-aware tolerance
  Eigen::ComplexEigenSolver<Mat3c> es(b, false);
  for (int i = 0; i < 3; ++i) {
    const cplx ev = es.eigenvalues()(i);
    CHECK(std::min(std::abs(ev - jd.xi_eps3), std::abs(ev - jd.xi_mu3)) <= 2e-7);
  }

  const Mat3c quad = s.T() * b * b + s.A(xi) * b + s.Q(xi);
  CHECK(quad.norm() <= 1e-10 * s.Q(xi).norm());
}

TEST_CASE("route agreement: jordan vs contour") {
  Rng rng(4711);
  for (int i = 0; i < 100; ++i) {
    const ProblemInstance inst = generic_instance(1000 + i);
    const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
    const double th = rng.uniform() * 6.283185307;
    const TangentialCovector xi(std::cos(th), std::sin(th));
    const Mat3c bj =
        principal_B_jordan(jordan_data(s.eps_metric(), s.mu_metric(), xi));
    const Mat3c bc = principal_B_contour(s, xi);
    CHECK((bj - bc).norm() <= 1e-8 * bj.norm());
  }
}

TEST_CASE("contour route survives the degenerate point") {
  // eps = mu = I: coincident eigenvalues, the covector basis fails
  const SymbolSet s(MetricJet::constant(Metric3::identity()),
                    MetricJet::constant(Metric3::identity()), 1.0);
  const TangentialCovector xi(1.0, 0.0);
  CHECK_THROWS_AS(jordan_data(Metric3::identity(), Metric3::identity(), xi),
                  degenerate_error);
  const Mat3c b = principal_B_contour(s, xi);
  CHECK((s.T() * b * b + s.A(xi) * b + s.Q(xi)).norm() <= 1e-9 * s.Q(xi).norm());
  // dispatcher falls back silently
  const Mat3c bd = principal_B(s, xi);
  CHECK((bd - b).norm() <= 1e-12);
}

TEST_CASE("B is homogeneous of degree one") {
  const ProblemInstance inst = generic_instance(55);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xi(0.3, 1.1);
  const Mat3c b1 = principal_B(s, xi);
  const Mat3c b2 = principal_B(s, TangentialCovector(2.0 * xi));
  CHECK((b2 - 2.0 * b1).norm() <= 1e-9 * b1.norm());
}

TEST_CASE("eigenvalues of B and C stay in the upper half plane") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ProblemInstance inst = generic_instance(seed);
    const SymbolSet sh = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
    const SymbolSet se = coefficient_symbols(inst.mu_jet, inst.eps_jet, inst.omega);
    const TangentialCovector xi(1.0, 0.5);
    for (const Mat3c& b : {principal_B(sh, xi), principal_B(se, xi)}) {
      Eigen::ComplexEigenSolver<Mat3c> es(b, false);
      for (int k = 0; k < 3; ++k) CHECK(es.eigenvalues()(k).imag() > 0.0);
    }
  }
}

TEST_CASE("C-side equals B of the swapped problem") {
  const ProblemInstance inst = generic_instance(123);
  const SymbolSet se = coefficient_symbols(inst.mu_jet, inst.eps_jet, inst.omega);
  const TangentialCovector xi(1.0, -0.25);
  const Mat3c c = principal_B(se, xi);
  const JordanData jd = jordan_data(inst.mu_jet.value, inst.eps_jet.value, xi);
  CHECK((principal_B_jordan(jd) - c).norm() <= 1e-9 * c.norm());
  // the single eigenvalue of the C block is the eps root
  Eigen::ComplexEigenSolver<Mat3c> es(c, false);
  const auto [xe, xm] = eigenvalues(inst.eps_jet.value, inst.mu_jet.value, xi);
  double dist_e = 1e300;
  for (int k = 0; k < 3; ++k)
    dist_e = std::min(dist_e, std::abs(es.eigenvalues()(k) - xm));
  CHECK(dist_e <= 1e-9);
  (void)xe;
}

TEST_CASE("six roots come in conjugate pairs") {
  const ProblemInstance inst = generic_instance(314);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xi(0.9, 0.1);
  const auto roots = det_roots(s, xi);
  const auto [xe, xm] = eigenvalues(s.eps_metric(), s.mu_metric(), xi);
  // companion roots match the analytic multiset; xm is a defective double
  // root so the companion eigensolver only reaches ~sqrt(eps) there
  const std::array<cplx, 6> expect{xe,           std::conj(xe), xm,
                                   std::conj(xm), xm,           std::conj(xm)};
  std::array<bool, 6> used{};
  for (int i = 0; i < 6; ++i) {
    double best = 1e300;
    int pick = -1;
    for (int j = 0; j < 6; ++j) {
      if (used[j]) continue;
      if (std::abs(roots[i] - expect[j]) < best) {
        best = std::abs(roots[i] - expect[j]);
        pick = j;
      }
    }
    used[pick] = true;
    CHECK(best <= 5e-7);
  }
  // pairing of the computed roots themselves
  std::array<bool, 6> taken{};
  for (int i = 0; i < 6; ++i) {
    double best = 1e300;
    int pick = -1;
    for (int j = 0; j < 6; ++j) {
      if (taken[j]) continue;
      if (std::abs(std::conj(roots[i]) - roots[j]) < best) {
        best = std::abs(std::conj(roots[i]) - roots[j]);
        pick = j;
      }
    }
    taken[pick] = true;
    CHECK(best <= 5e-7);
  }
}

TEST_CASE("triangular structure of M in the covector basis") {
  const ProblemInstance inst = generic_instance(404);
  const Metric3 eps = inst.eps_jet.value;
  const Metric3 mu = inst.mu_jet.value;
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xit(1.0, 0.4);
  Rng rng(1);
  const cplx xi3(rng.sym(), rng.sym());
  const Covector3 xi(xit(0), xit(1), xi3);
  const Covector3 zeta = eps.inverse().mat().cast<cplx>() * mu.mat().cast<cplx>() * xi;
  const Covector3 chi = star_wedge_upper(xi, zeta, eps.mat());
  Mat3c p;
  p.col(0) = chi;
  p.col(1) = xi;
  p.col(2) = zeta;
  const Mat3c rep = p.inverse() * matrix_polynomial(s, xit, xi3) * p;
  const double scale = rep.norm();
  // first row and column vanish off the (1,1) entry, and (2,2) vanishes
  CHECK(std::abs(rep(0, 1)) <= 1e-11 * scale);
  CHECK(std::abs(rep(0, 2)) <= 1e-11 * scale);
  CHECK(std::abs(rep(1, 0)) <= 1e-11 * scale);
  CHECK(std::abs(rep(2, 0)) <= 1e-11 * scale);
  CHECK(std::abs(rep(1, 1)) <= 1e-11 * scale);
  // (1,1) entry is |xi|^2_eps
  CHECK(std::abs(rep(0, 0) - bilinear_form(xi, xi, eps)) <= 1e-11 * scale);
  // the 2x2 corner carries the |xi|^4_mu factor of the determinant
  const cplx m2 = bilinear_form(xi, xi, mu);
  const cplx corner = rep(1, 2) * rep(2, 1) - rep(1, 1) * rep(2, 2);
  const double rho = std::sqrt(eps.det() / mu.det());
  CHECK(std::abs(corner + rho * m2 * m2) <= 1e-10 * scale * scale);
}

TEST_CASE("factorization residual") {
  const ProblemInstance inst = generic_instance(808);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xi(1.0, 0.7);
  const Mat3c b = principal_B(s, xi);
  std::vector<cplx> xi3;
  Rng rng(2);
  for (int k = 0; k < 20; ++k) xi3.emplace_back(2.0 * rng.sym(), 2.0 * rng.sym());
  const FactorizationResidual fr = factorization_residual(s, xi, b, xi3);
  CHECK(fr.max_over_xi3 <= 1e-10 * fr.scale);
  CHECK(fr.q_identity <= 1e-10 * fr.scale);

  // sensitivity: a 1e-3 relative perturbation must be visible against |Q|
  Mat3c bad = b;
  bad(0, 1) += 1e-3 * b.norm();
  bad(1, 2) -= 1e-3 * b.norm();
  const FactorizationResidual fr_bad = factorization_residual(s, xi, bad, xi3);
  CHECK(fr_bad.q_identity >= 1e-4 * s.Q(xi).norm());
}

TEST_CASE("left factor carries the conjugate spectrum") {
  const ProblemInstance inst = generic_instance(606);
  const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
  const TangentialCovector xi(0.5, 0.5);
  const Mat3c b = principal_B(s, xi);
  const Mat3c bstar = left_factor_matched(s, xi, b);
  const auto [xe, xm] = eigenvalues(s.eps_metric(), s.mu_metric(), xi);
  // conjugated multiset via the annihilating polynomial
  const Mat3c id = Mat3c::Identity();
  const Mat3c annihil = (bstar - std::conj(xe) * id) * (bstar - std::conj(xm) * id) *
                        (bstar - std::conj(xm) * id);
  CHECK(annihil.norm() <= 1e-9 * std::pow(std::max(bstar.norm(), 1.0), 3));
}

TEST_CASE("riccati: order-2 part vanishes along the normal line") {
  const ProblemInstance inst = generic_instance(999);
  const JetLine line = [&inst](double x3) {
    return std::make_pair(jet_shift_normal(inst.eps_jet, x3),
                          jet_shift_normal(inst.mu_jet, x3));
  };
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(0.01 * k);
  const TangentialCovector xi(1.0, -0.3);
  const RiccatiResidual rr = riccati_full_residual(line, xi, grid, inst.omega);
  CHECK(rr.order2 <= 1e-10 * rr.scale);
  CHECK(std::isfinite(rr.lower_order));
}

TEST_CASE("riccati: constant metrics leave only the zero-order term") {
  Rng rng(21);
  const Metric3 eps(random_spd3(rng));
  const Metric3 mu(random_spd3(rng));
  const JetLine line = [&](double) {
    return std::make_pair(MetricJet::constant(eps), MetricJet::constant(mu));
  };
  const TangentialCovector xi(1.0, 0.2);
  const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(mu), 1.0);
  // D3 B vanishes for x3-independent metrics
  const Mat3c b0 = principal_B(s, xi);
  const double h = 1e-5;
  const Mat3c d3b = (principal_B(s, xi) - b0) / h;  // same set twice: exact zero
  CHECK(d3b.norm() <= 1e-9);
  const RiccatiResidual rr = riccati_full_residual(line, xi, {0.0, 0.05}, 1.0);
  // with G = F = 0 and D3 B = 0 the remainder is exactly |R|
  const double r_norm = s.R().norm();
  CHECK(std::abs(rr.lower_order - r_norm) <= 1e-9 * std::max(1.0, r_norm));
}

TEST_CASE("near-degenerate instances: contour residual and dispatcher") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProblemInstance inst = make_instance(seed, ProblemKind::NearDegenerate);
    const SymbolSet s = coefficient_symbols(inst.eps_jet, inst.mu_jet, inst.omega);
    const TangentialCovector xi(1.0, 0.3);
    // the contour route holds the 1e-9 budget arbitrarily close to degeneracy
    const Mat3c bc = principal_B_contour(s, xi);
    CHECK((s.T() * bc * bc + s.A(xi) * bc + s.Q(xi)).norm() <=
          1e-9 * s.Q(xi).norm());
    // the dispatcher never throws; at ~1e-6 eigenvalue separation it may
    // still take the jordan route, whose conditioning costs a few digits
    const Mat3c b = principal_B(s, xi);
    CHECK((s.T() * b * b + s.A(xi) * b + s.Q(xi)).norm() <= 1e-6 * s.Q(xi).norm());
  }
}

TEST_CASE("riccati order-2 metric is scale invariant in xi~") {
  const ProblemInstance inst = generic_instance(1234);
  const JetLine line = [&inst](double x3) {
    return std::make_pair(jet_shift_normal(inst.eps_jet, x3),
                          jet_shift_normal(inst.mu_jet, x3));
  };
  const TangentialCovector xi(0.8, 0.6);
  const RiccatiResidual r1 = riccati_full_residual(line, xi, {0.0, 0.02}, 1.0);
  const RiccatiResidual r2 =
      riccati_full_residual(line, TangentialCovector(2.0 * xi), {0.0, 0.02}, 1.0);
  CHECK(r1.order2 / r1.scale <= 1e-10);
  CHECK(r2.order2 / r2.scale <= 1e-10);
}

TEST_CASE("near-degenerate continuity of the contour route") {
  // path mu(t) from a generic metric to eps: B varies continuously
  const ProblemInstance inst = generic_instance(31415);
  const Metric3 eps = inst.eps_jet.value;
  const Mat3 mu0 = inst.mu_jet.value.mat();
  const TangentialCovector xi(1.0, 0.0);
  const int steps = 40;
  std::vector<Mat3c> bs;
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const Mat3 mu_t = (1.0 - t) * mu0 + t * eps.mat();
    const SymbolSet s(MetricJet::constant(eps), MetricJet::constant(Metric3(mu_t)),
                      1.0);
    bs.push_back(principal_B_contour(s, xi));
  }
  double max_jump = 0.0, sum_jump = 0.0;
  for (std::size_t k = 1; k < bs.size(); ++k) {
    const double d = (bs[k] - bs[k - 1]).norm();
    max_jump = std::max(max_jump, d);
    sum_jump += d;
  }
  CHECK(max_jump <= 10.0 * (sum_jump / steps));
}

TEST_CASE("jet taylor evaluation against the shifted jet") {
  const ProblemInstance inst = generic_instance(2718);
  const double x3 = 0.07;
  const MetricJet shifted = jet_shift_normal(inst.eps_jet, x3);
  CHECK((shifted.value.mat() - jet_eval(inst.eps_jet, Vec3(0, 0, x3)).mat()).norm() <=
        1e-14);
  const double h = 1e-6;
  const Mat3 fd = (jet_eval(inst.eps_jet, Vec3(0, 0, x3 + h)).mat() -
                   jet_eval(inst.eps_jet, Vec3(0, 0, x3 - h)).mat()) /
                  (2.0 * h);
  CHECK((fd - shifted.d1[2]).norm() <= 1e-8);
}

TEST_CASE("problem file round trip") {
  const ProblemInstance inst = generic_instance(5150);
  const std::string text = to_json_string(inst);
  const ProblemInstance back = problem_from_json_string(text);
  CHECK((back.eps_jet.value.mat() - inst.eps_jet.value.mat()).norm() == 0.0);
  CHECK((back.mu_jet.d1[1] - inst.mu_jet.d1[1]).norm() == 0.0);
  CHECK((back.mu_jet.d2_at(0, 2) - inst.mu_jet.d2_at(0, 2)).norm() == 0.0);
  CHECK(back.omega == inst.omega);
  CHECK(to_json_string(back) == text);
}
