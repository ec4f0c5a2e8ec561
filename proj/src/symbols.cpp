#include "maxsym/symbols.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace maxsym {

int MetricJet::pack2(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return b;           // (0,0)->0 (0,1)->1 (0,2)->2
  return a == 1 ? b + 2 : 5;      // (1,1)->3 (1,2)->4 (2,2)->5
}

Mat3 MetricJet::d_normal(int k) const {
  if (k < 1) throw std::invalid_argument("normal derivative order must be >= 1");
  if (k == 1) return d1[2];
  if (k == 2) return d2_at(2, 2);
  const std::size_t idx = static_cast<std::size_t>(k) - 3;
  if (idx < dn_hi.size()) return dn_hi[idx];
  return Mat3::Zero();
}

MetricJet MetricJet::constant(const Metric3& value) {
  MetricJet j;
  j.value = value;
  return j;
}

void MetricJet::validate() const {
  auto sym = [](const Mat3& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * norm_scale(m);
  };
  for (const auto& m : d1)
    if (!sym(m)) throw std::invalid_argument("jet derivative not symmetric");
  for (const auto& m : d2)
    if (!sym(m)) throw std::invalid_argument("jet derivative not symmetric");
  for (const auto& m : dn_hi)
    if (!sym(m)) throw std::invalid_argument("jet derivative not symmetric");
}

Metric3 jet_eval(const MetricJet& jet, const Vec3& x) {
  Mat3 m = jet.value.mat();
  for (int a = 0; a < 3; ++a) m += x(a) * jet.d1[a];
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      m += (a == b ? 0.5 : 1.0) * x(a) * x(b) * jet.d2_at(a, b);
  double fact = 6.0, pw = x(2) * x(2) * x(2);
  for (std::size_t k = 0; k < jet.dn_hi.size(); ++k) {
    m += pw / fact * jet.dn_hi[k];
    pw *= x(2);
    fact *= static_cast<double>(k + 4);
  }
  return Metric3(m);
}

MetricJet jet_shift_normal(const MetricJet& jet, double x3) {
  MetricJet out = jet;
  const Vec3 x(0.0, 0.0, x3);
  out.value = jet_eval(jet, x);
  // first derivatives of the Taylor field at (0,0,x3)
  for (int a = 0; a < 3; ++a) {
    Mat3 m = jet.d1[a] + x3 * jet.d2_at(a, 2);
    if (a == 2) {
      double fact = 2.0, pw = x3 * x3;
      for (std::size_t k = 0; k < jet.dn_hi.size(); ++k) {
        m += pw / fact * jet.dn_hi[k];
        pw *= x3;
        fact *= static_cast<double>(k + 3);
      }
    }
    out.d1[a] = m;
  }
  // second derivatives: d2 constant except the pure-normal tail
  Mat3 d33 = jet.d2_at(2, 2);
  double fact = 1.0, pw = x3;
  for (std::size_t k = 0; k < jet.dn_hi.size(); ++k) {
    d33 += pw / fact * jet.dn_hi[k];
    pw *= x3;
    fact *= static_cast<double>(k + 2);
  }
  out.d2_at(2, 2) = d33;
  out.dn_hi.clear();  // truncated; enough for coefficient symbols
  return out;
}

namespace {

double trace_prod(const Mat3& a, const Mat3& b) { return (a * b).trace(); }

}  // namespace

SymbolSet::SymbolSet(const MetricJet& eps_jet, const MetricJet& mu_jet, double omega)
    : eps_(eps_jet.value.mat()),
      mu_(mu_jet.value.mat()),
      eps_inv_(eps_jet.value.inverse().mat()),
      omega_(omega) {
  rho_ = std::sqrt(eps_.determinant() / mu_.determinant());
  const Mat3 mu_inv = mu_jet.value.inverse().mat();
  for (int a = 0; a < 3; ++a) {
    dmu_[a] = mu_jet.d1[a];
    deps_inv_[a] = -eps_inv_ * eps_jet.d1[a] * eps_inv_;
  }
  // w^k = d_a(sqrt|mu^-1| mu^{ka}) / sqrt|mu^-1|
  for (int k = 0; k < 3; ++k) {
    double w = 0.0;
    for (int a = 0; a < 3; ++a)
      w += dmu_[a](k, a) - 0.5 * mu_(k, a) * trace_prod(mu_inv, dmu_[a]);
    w_mu_(k) = w;
  }

  // T
  t_ = Mat3c::Zero();
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      double v = 0.0;
      for (int q = 0; q < 3; ++q) v += rho_ * eps_inv_(l, q) * mu_(q, 2) * mu_(k, 2);
      if (l == k) v += eps_(2, 2);
      if (l == 2) v -= eps_(2, k);
      t_(l, k) = v;
    }
  if (std::abs(t_.determinant()) < 1e-14)
    throw std::runtime_error("coefficient T numerically singular");

  const double det_eps = eps_.determinant();  // = 1/|eps^-1|

  // G
  g_ = Mat3c::Zero();
  for (int l = 0; l < 3; ++l) {
    for (int k = 0; k < 3; ++k) {
      cplx v = 0.0;
      for (int q = 0; q < 3; ++q) {
        double inner = 0.0;
        for (int a = 0; a < 3; ++a) inner += mu_(q, a) * dmu_[a](k, 2);
        inner += mu_(q, 2) * w_mu_(k);
        v += -iu * rho_ * eps_inv_(l, q) * inner;
      }
      if (k < 2) {
        double curl = 0.0;
        for (int q = 0; q < 3; ++q)
          for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 3; ++j)
              for (int bt = 0; bt < 2; ++bt)
                curl += eps_inv_(l, q) * levi_civita(a, j, q) * deps_inv_[a](bt, j) *
                        levi_civita(2, k, bt);
        v += iu * det_eps * curl;
      }
      g_(l, k) = v;
    }
  }

  // R
  r_ = Mat3c::Zero();
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      cplx v = 0.0;
      for (int q = 0; q < 3; ++q) {
        v += -omega_ * omega_ * rho_ * eps_inv_(l, q) * mu_(q, k);
        double second = 0.0;
        for (int b = 0; b < 3; ++b) {
          // d_b w^k from the jet's second derivatives
          double dbw = 0.0;
          for (int a = 0; a < 3; ++a) {
            const Mat3& dab_mu = mu_jet.d2_at(a, b);
            dbw += dab_mu(k, a);
            dbw -= 0.5 * dmu_[b](k, a) * trace_prod(mu_inv, dmu_[a]);
            dbw -= 0.5 * mu_(k, a) *
                   (trace_prod(mu_inv, dab_mu) -
                    trace_prod(mu_inv * dmu_[b] * mu_inv, dmu_[a]));
          }
          second += mu_(q, b) * dbw;
        }
        v += -eps_inv_(l, q) * second;
      }
      r_(l, k) = v;
    }
}

Mat3c SymbolSet::A(const TangentialCovector& xi) const {
  Mat3c a = Mat3c::Zero();
  Vec3 mt = Vec3::Zero(), et = Vec3::Zero();
  double nu_xi = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int t = 0; t < 2; ++t) {
      mt(k) += mu_(k, t) * xi(t);
      et(k) += eps_(t, k) * xi(t);
    }
  for (int t = 0; t < 2; ++t) nu_xi += eps_(2, t) * xi(t);
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      double v = 0.0;
      for (int q = 0; q < 3; ++q)
        v += rho_ * eps_inv_(l, q) * (mu_(q, 2) * mt(k) + mt(q) * mu_(k, 2));
      if (l == k) v += 2.0 * nu_xi;
      if (l == 2) v -= et(k);
      if (l < 2) v -= xi(l) * eps_(2, k);
      a(l, k) = v;
    }
  return a;
}

Mat3c SymbolSet::Q(const TangentialCovector& xi) const {
  Mat3c q = Mat3c::Zero();
  Vec3 mt = Vec3::Zero(), et = Vec3::Zero();
  double xi2_eps = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int t = 0; t < 2; ++t) {
      mt(k) += mu_(k, t) * xi(t);
      et(k) += eps_(t, k) * xi(t);
    }
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) xi2_eps += eps_(s, t) * xi(s) * xi(t);
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      double v = 0.0;
      for (int p = 0; p < 3; ++p) v += rho_ * eps_inv_(l, p) * mt(p) * mt(k);
      if (l == k) v += xi2_eps;
      if (l < 2) v -= xi(l) * et(k);
      q(l, k) = v;
    }
  return q;
}

Mat3c SymbolSet::F(const TangentialCovector& xi) const {
  const double det_eps = eps_.determinant();
  Mat3c f = Mat3c::Zero();
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      cplx v = 0.0;
      for (int q = 0; q < 3; ++q) {
        double inner = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int t = 0; t < 2; ++t) inner += mu_(q, a) * dmu_[a](k, t) * xi(t);
        for (int t = 0; t < 2; ++t) inner += mu_(q, t) * xi(t) * w_mu_(k);
        v += -iu * rho_ * eps_inv_(l, q) * inner;
      }
      double curl = 0.0;
      for (int q = 0; q < 3; ++q)
        for (int a = 0; a < 3; ++a)
          for (int j = 0; j < 3; ++j)
            for (int b = 0; b < 3; ++b)
              for (int t = 0; t < 2; ++t)
                curl += eps_inv_(l, q) * levi_civita(a, j, q) * deps_inv_[a](b, j) *
                        levi_civita(t, k, b) * xi(t);
      v += iu * det_eps * curl;
      f(l, k) = v;
    }
  return f;
}

SymbolSet coefficient_symbols(const MetricJet& eps_jet, const MetricJet& mu_jet,
                              double omega) {
  eps_jet.validate();
  mu_jet.validate();
  return SymbolSet(eps_jet, mu_jet, omega);
}

Mat3c matrix_polynomial(const SymbolSet& s, const TangentialCovector& xi, cplx xi3) {
  return s.T() * (xi3 * xi3) + s.A(xi) * xi3 + s.Q(xi);
}

cplx positive_imag_root(const Metric3& m, const TangentialCovector& xi) {
  if (xi.norm() == 0.0) throw std::invalid_argument("xi~ must be nonzero");
  const Mat3& a = m.mat();
  double nu_xi = 0.0, quad = 0.0;
  for (int t = 0; t < 2; ++t) nu_xi += a(2, t) * xi(t);
  for (int ss = 0; ss < 2; ++ss)
    for (int t = 0; t < 2; ++t)
      quad += (a(ss, t) - a(ss, 2) * a(t, 2) / a(2, 2)) * xi(ss) * xi(t);
  return cplx(-nu_xi / a(2, 2), std::sqrt(a(2, 2) * quad) / a(2, 2));
}

std::pair<cplx, cplx> eigenvalues(const Metric3& eps_hat, const Metric3& mu_hat,
                                  const TangentialCovector& xi) {
  return {positive_imag_root(eps_hat, xi), positive_imag_root(mu_hat, xi)};
}

std::array<cplx, 6> det_roots(const SymbolSet& s, const TangentialCovector& xi) {
  const Mat3c ti = s.T().inverse();
  Eigen::Matrix<cplx, 6, 6> comp = Eigen::Matrix<cplx, 6, 6>::Zero();
  comp.block<3, 3>(0, 3) = Mat3c::Identity();
  comp.block<3, 3>(3, 0) = -ti * s.Q(xi);
  comp.block<3, 3>(3, 3) = -ti * s.A(xi);
  Eigen::ComplexEigenSolver<Eigen::Matrix<cplx, 6, 6>> es(comp, false);
  std::array<cplx, 6> roots;
  for (int i = 0; i < 6; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

JordanData jordan_data(const Metric3& eps_hat, const Metric3& mu_hat,
                       const TangentialCovector& xi) {
  JordanData jd;
  std::tie(jd.xi_eps3, jd.xi_mu3) = eigenvalues(eps_hat, mu_hat, xi);
  if (std::abs(jd.xi_eps3 - jd.xi_mu3) < 1e-8 * xi.norm())
    throw degenerate_error("coincident eigenvalues: covector basis degenerates");

  const Mat3c mu = mu_hat.mat().cast<cplx>();
  const Mat3c eps_inv_mu = eps_hat.inverse().mat().cast<cplx>() * mu;
  const double rho = std::sqrt(eps_hat.det() / mu_hat.det());

  const Covector3 xi_eps(xi(0), xi(1), jd.xi_eps3);
  const Covector3 zeta_eps = eps_inv_mu * xi_eps;
  jd.chi = star_wedge_upper(xi_eps, zeta_eps, eps_hat.mat());

  jd.xi_mu = Covector3(xi(0), xi(1), jd.xi_mu3);
  jd.zeta_mu = eps_inv_mu * jd.xi_mu;
  const cplx nu_xi_mu = (mu * jd.xi_mu)(2);
  const cplx mixed = jd.xi_mu.transpose() * mu * eps_hat.inverse().mat().cast<cplx>() *
                     mu * jd.xi_mu;
  const cplx xi_mu_eps = bilinear_form(jd.xi_mu, jd.xi_mu, eps_hat);
  jd.m_coeff = -2.0 * rho * nu_xi_mu / (rho * mixed + xi_mu_eps);
  jd.gamma = Covector3(0.0, 0.0, 1.0) + jd.m_coeff * jd.zeta_mu;

  const double n1 = jd.chi.norm(), n2 = jd.xi_mu.norm(), n3 = jd.gamma.norm();
  jd.X.col(0) = jd.chi / n1;
  jd.X.col(1) = jd.xi_mu / n2;
  jd.X.col(2) = jd.gamma / n3;
  jd.J = Mat3c::Zero();
  jd.J(0, 0) = jd.xi_eps3;
  jd.J(1, 1) = jd.xi_mu3;
  jd.J(2, 2) = jd.xi_mu3;
  // chain entry for the rescaled columns; n2/n3 times the unnormalised 1
  jd.J(1, 2) = n2 / n3;
  return jd;
}

Mat3c principal_B_jordan(const JordanData& jd) {
  Eigen::JacobiSVD<Mat3c> svd(jd.X);
  const double cond =
      svd.singularValues()(0) / std::max(svd.singularValues()(2), 1e-300);
  if (cond > 1e8)
    throw near_degenerate_error("eigenvector matrix ill-conditioned");
  return jd.X * jd.J * jd.X.inverse();
}

Mat3c principal_B_contour(const SymbolSet& s, const TangentialCovector& xi, int nodes) {
  const auto [xi_eps3, xi_mu3] = eigenvalues(s.eps_metric(), s.mu_metric(), xi);
  const cplx center = 0.5 * (xi_eps3 + xi_mu3);
  const double spread = 0.5 * std::abs(xi_eps3 - xi_mu3);
  const double dmin = std::min(std::abs(std::conj(xi_eps3) - center),
                               std::abs(std::conj(xi_mu3) - center));
  if (dmin <= spread * (1.0 + 1e-12))
    throw contour_error("cannot separate conjugate eigenvalues");
  const double radius = 0.5 * (spread + dmin);

  Mat3c m0 = Mat3c::Zero(), m1 = Mat3c::Zero();
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    const cplx z = center + radius * std::exp(iu * theta);
    const cplx dz = radius * iu * std::exp(iu * theta);  // times dtheta
    const Mat3c minv = matrix_polynomial(s, xi, z).inverse();
    m0 += minv * dz;
    m1 += z * minv * dz;
  }
  Eigen::JacobiSVD<Mat3c> svd(m0);
  if (svd.singularValues()(2) < 1e-12 * svd.singularValues()(0))
    throw contour_error("moment matrix singular; enlarge N or move contour");
  return m1 * m0.inverse();
}

Mat3c principal_B(const SymbolSet& s, const TangentialCovector& xi) {
  try {
    return principal_B_jordan(jordan_data(s.eps_metric(), s.mu_metric(), xi));
  } catch (const degenerate_error&) {
    return principal_B_contour(s, xi);
  } catch (const near_degenerate_error&) {
    return principal_B_contour(s, xi);
  }
}

Mat3c left_factor_matched(const SymbolSet& s, const TangentialCovector& xi,
                          const Mat3c& b1) {
  // matching the xi3 coefficient of M = (I xi3 - B*) T (I xi3 - B):
  // A = -(B* T + T B)
  return -(s.A(xi) + s.T() * b1) * s.T().inverse();
}

FactorizationResidual factorization_residual(const SymbolSet& s,
                                             const TangentialCovector& xi,
                                             const Mat3c& b1,
                                             const std::vector<cplx>& xi3_samples) {
  FactorizationResidual out;
  const Mat3c bstar = left_factor_matched(s, xi, b1);
  const Mat3c q = s.Q(xi);
  out.q_identity = (q - bstar * s.T() * b1).norm();
  out.scale = std::max(1e-300, q.norm());
  for (const cplx& z : xi3_samples) {
    const Mat3c lhs = matrix_polynomial(s, xi, z);
    const Mat3c rhs = (Mat3c::Identity() * z - bstar) * s.T() *
                      (Mat3c::Identity() * z - b1);
    out.max_over_xi3 = std::max(out.max_over_xi3, (lhs - rhs).norm());
    out.scale = std::max(out.scale, lhs.norm());
  }
  return out;
}

RiccatiResidual riccati_full_residual(const JetLine& line, const TangentialCovector& xi,
                                      const std::vector<double>& x3_grid, double omega) {
  RiccatiResidual out;
  const double h = 1e-5;
  for (double x3 : x3_grid) {
    const auto [ej, mj] = line(x3);
    const SymbolSet s(ej, mj, omega);
    const Mat3c b = principal_B(s, xi);
    const Mat3c quad = s.T() * b * b + s.A(xi) * b + s.Q(xi);
    out.order2 = std::max(out.order2, quad.norm());
    out.scale = std::max(out.scale, s.Q(xi).norm());

    const auto [ejp, mjp] = line(x3 + h);
    const auto [ejm, mjm] = line(x3 - h);
    const Mat3c bp = principal_B(SymbolSet(ejp, mjp, omega), xi);
    const Mat3c bm = principal_B(SymbolSet(ejm, mjm, omega), xi);
    const Mat3c d3b = -iu * (bp - bm) / (2.0 * h);
    const Mat3c lower = s.T() * d3b + s.G() * b + s.F(xi) + s.R();
    out.lower_order = std::max(out.lower_order, lower.norm());
  }
  return out;
}

}  // namespace maxsym
