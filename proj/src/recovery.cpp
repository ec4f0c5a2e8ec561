#include "maxsym/recovery.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "maxsym/geometry.hpp"

namespace maxsym {

SymbolSampler forward_impedance_sampler(const Metric3& eps_hat, double omega) {
  return SymbolSampler{[eps_hat, omega](const TangentialCovector& xi) {
                         const Covector3 f(-xi(1), xi(0), 0.0);
                         return impedance_principal(eps_hat, xi, f, omega);
                       },
                       omega};
}

SymbolSampler forward_admittance_sampler(const Metric3& mu_hat, double omega) {
  return SymbolSampler{[mu_hat, omega](const TangentialCovector& xi) {
                         const Covector3 g(-xi(1), xi(0), 0.0);
                         return admittance_principal(mu_hat, xi, g, omega);
                       },
                       omega};
}

SymbolSampler table_sampler(const SymbolTable& table) {
  if (table.directions.size() != table.values.size() || table.directions.empty())
    throw inconsistent_data("sample table malformed");
  auto lookup = [table](const TangentialCovector& xi) {
    const double n = xi.norm();
    for (std::size_t i = 0; i < table.directions.size(); ++i) {
      const TangentialCovector& d = table.directions[i];
      const double dn = d.norm();
      if ((xi / n - d / dn).norm() < 1e-9) {
        // degree-1 homogeneity: lambda at rot(xi) = (n/dn)^2 lambda at rot(d)
        return Covector3((n / dn) * (n / dn) * table.values[i]);
      }
    }
    throw inconsistent_data("direction not present in sample table");
  };
  return SymbolSampler{lookup, table.omega};
}

namespace {

// scalar s with lambda = s * xi~; rejects output not parallel to xi~
cplx parallel_scalar(const Covector3& lambda, const TangentialCovector& xi) {
  const Vec2c l2(lambda(0), lambda(1));
  const Vec2c xc(xi(0), xi(1));
  const cplx s = (l2(0) * xi(0) + l2(1) * xi(1)) / xi.squaredNorm();
  if ((l2 - s * xc).norm() > 1e-8 * std::max(1.0, l2.norm()) ||
      std::abs(lambda(2)) > 1e-10 * std::max(1.0, l2.norm()))
    throw inconsistent_data("symbol sample not parallel to xi~");
  return s;
}

Mat2 recover_from_quadratic(const SymbolSampler& sampler, double sign) {
  auto q2 = [&](const TangentialCovector& xi) {
    const cplx s = parallel_scalar(sampler.lambda_rot(xi), xi);
    const double w = xi.squaredNorm();  // wedge of xi~ with rot(xi~)
    // |xi|_t / sqrt(det t) solved from the symbol scalar
    const cplx q = sign * iu * w / (sampler.omega * s);
    if (std::abs(q.imag()) > 1e-8 * std::abs(q) || q.real() <= 0.0)
      throw inconsistent_data("symbol magnitude not a positive real");
    return q.real() * q.real();
  };
  const double q11 = q2(TangentialCovector(1.0, 0.0));
  const double q22 = q2(TangentialCovector(0.0, 1.0));
  const double q12 = 0.5 * (q2(TangentialCovector(1.0, 1.0)) - q11 - q22);
  Mat2 q;
  q << q11, q12, q12, q22;
  if (!is_spd2(q)) throw inconsistent_data("recovered quadratic form not SPD");
  return Mat2(q / q.determinant());
}

}  // namespace

Mat2 recover_tangential(const SymbolSampler& sampler) {
  return recover_from_quadratic(sampler, +1.0);
}

Mat2 recover_tangential_mu(const SymbolSampler& sampler) {
  return recover_from_quadratic(sampler, -1.0);
}

MultiplesResult multiples_test(const Mat2& eps_t, const Mat2& mu_t, double tol) {
  if (!is_spd2(eps_t) || !is_spd2(mu_t))
    throw std::invalid_argument("tangential metrics must be SPD");
  const double a = (eps_t.inverse() * mu_t).trace() / 2.0;
  const bool multiple = (mu_t - a * eps_t).norm() <= tol * mu_t.norm();
  return MultiplesResult{multiple, multiple ? a : 0.0};
}

double compensated_mu33(double a, double mu33, double c) {
  // the cross-pair identity in the multiples case reduces to
  // sqrt(a) t + t^2 = c (sqrt(a) sqrt(mu33) + mu33) with t = sqrt(mu33')
  const double sa = std::sqrt(a);
  const double rhs = c * (sa * std::sqrt(mu33) + mu33);
  const double t = 0.5 * (-sa + std::sqrt(sa * sa + 4.0 * rhs));
  return t * t;
}

NormalMuReport recover_normal_mu(const Mat2& eps_t, const Mat2& mu_t,
                                 const NormalComponents& nc,
                                 const NormalComponents& nc_prime,
                                 const std::vector<TangentialCovector>& grid,
                                 double tol) {
  if (grid.size() < 8) throw std::invalid_argument("direction grid too small");
  if (nc.mu33 <= 0.0 || nc_prime.mu33 <= 0.0)
    throw std::invalid_argument("mu33 must be positive");
  NormalMuReport rep;
  rep.mu33_prime = nc_prime.mu33;
  for (const auto& xi : grid)
    rep.max_residual =
        std::max(rep.max_residual, boundary_pair_residual(eps_t, mu_t, nc, nc_prime, xi));

  if (rep.max_residual > tol) {
    rep.verdict = NormalVerdict::Inconsistent;
    return rep;
  }
  const double scale = std::max({nc.mu_n.norm(), nc_prime.mu_n.norm(),
                                 std::abs(nc.mu33), std::abs(nc_prime.mu33)});
  const bool equal = (nc.mu_n - nc_prime.mu_n).norm() <= tol * scale &&
                     std::abs(nc.mu33 - nc_prime.mu33) <= tol * scale;
  if (equal) {
    rep.verdict = NormalVerdict::Equal;
    rep.factor = 1.0;
    return rep;
  }
  const MultiplesResult mr = multiples_test(eps_t, mu_t, 1e-9);
  if (!mr.multiple) {
    // vanishing residual forces equality when the tangential metrics are
    // not multiples; unequal candidates reaching here are inconsistent
    rep.verdict = NormalVerdict::Inconsistent;
    return rep;
  }
  double c;
  if (nc.mu_n.norm() > tol * scale) {
    c = nc_prime.mu_n.dot(nc.mu_n) / nc.mu_n.squaredNorm();
    if ((nc_prime.mu_n - c * nc.mu_n).norm() > tol * scale) {
      rep.verdict = NormalVerdict::Inconsistent;
      return rep;
    }
  } else {
    const double sa = std::sqrt(mr.factor);
    c = (sa * std::sqrt(nc_prime.mu33) + nc_prime.mu33) /
        (sa * std::sqrt(nc.mu33) + nc.mu33);
  }
  rep.verdict = NormalVerdict::ProportionalWithFactor;
  rep.factor = c;
  return rep;
}

double derived_sqrt_det_rate(const Metric3& base, const Mat3& e) {
  const Mat3 binv = base.inverse().mat();
  return -0.5 / std::sqrt(base.det()) * (binv * e).trace();
}

JetPerturbation make_jet_perturbation(int kappa, const Mat3& e_eps, const Mat3& e_mu,
                                      const Metric3& base_eps, const Metric3& base_mu) {
  if (kappa < 1 || kappa > 3) throw std::invalid_argument("kappa must be 1, 2 or 3");
  auto sym = [](const Mat3& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * norm_scale(m);
  };
  if (!sym(e_eps) || !sym(e_mu))
    throw std::invalid_argument("perturbations must be symmetric");
  JetPerturbation p;
  p.kappa = kappa;
  p.e_eps = e_eps;
  p.e_mu = e_mu;
  p.r_eps = derived_sqrt_det_rate(base_eps, e_eps);
  p.r_mu = derived_sqrt_det_rate(base_mu, e_mu);
  return p;
}

double jet_perturbation_defect(const JetPerturbation& pert, const Metric3& base_eps,
                               const Metric3& base_mu) {
  return std::max(
      std::abs(pert.r_eps - derived_sqrt_det_rate(base_eps, pert.e_eps)),
      std::abs(pert.r_mu - derived_sqrt_det_rate(base_mu, pert.e_mu)));
}

Eigen::MatrixXd jet_residual_H_map(const Metric3& eps_hat, const Metric3& mu_hat,
                                   const std::vector<TangentialCovector>& grid,
                                   int kappa) {
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  const Mat3 eps_inv = eps_hat.inverse().mat();
  const double det_eps = eps_hat.det();  // 1 / |eps^-1|
  Eigen::MatrixXd out(6 * static_cast<int>(grid.size()), 3);
  int row = 0;
  for (const auto& xi : grid) {
    const JordanData jd = jordan_data(eps_hat, mu_hat, xi);
    const Covector3 xi_eps(xi(0), xi(1), jd.xi_eps3);
    // w_b = sigma^{d k b} xi_d chi_k, tangential components only
    Vec3c w = Vec3c::Zero();
    for (int b = 0; b < 3; ++b)
      for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k)
          w(b) += static_cast<double>(levi_civita(d, k, b)) * xi_eps(d) * jd.chi(k);
    for (int l = 0; l < 3; ++l) {
      // u_j = eps_inv(l, q) sigma^{3 j q} over tangential q
      const double u0 = eps_inv(l, 1);   // sigma(2,0,1) = +1
      const double u1 = -eps_inv(l, 0);  // sigma(2,1,0) = -1
      const cplx pref = iu * static_cast<double>(kappa) * det_eps;
      const cplx c00 = pref * u0 * w(0);
      const cplx c01 = pref * (u0 * w(1) + u1 * w(0));
      const cplx c11 = pref * u1 * w(1);
      out(row, 0) = c00.real();
      out(row, 1) = c01.real();
      out(row, 2) = c11.real();
      out(row + 1, 0) = c00.imag();
      out(row + 1, 1) = c01.imag();
      out(row + 1, 2) = c11.imag();
      row += 2;
    }
  }
  return out;
}

JetResidualE jet_residual_E_map(const Metric3& eps_hat, const Metric3& mu_hat,
                                const std::vector<TangentialCovector>& grid,
                                int kappa) {
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  const Mat3 mu_inv = mu_hat.inverse().mat();
  JetResidualE maps;
  const int n = static_cast<int>(grid.size());
  maps.stage1.resize(6 * n, 5);
  maps.stage2.resize(6 * n, 1);
  maps.coeff_min = std::numeric_limits<double>::infinity();
  int row = 0;
  for (const auto& xi : grid) {
    // electric side: chi of mu_hat at the mu root
    const JordanData jd = jordan_data(mu_hat, eps_hat, xi);
    const Covector3 xi_mu(xi(0), xi(1), jd.xi_eps3);  // root of mu_hat here
    Vec3c w = Vec3c::Zero();
    for (int b = 0; b < 3; ++b)
      for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k)
          w(b) += static_cast<double>(levi_civita(d, k, b)) * xi_mu(d) * jd.chi(k);

    // stage 2 coefficient: *_mu(nu ^ *_mu(chi ^ xi)) <nu, xi>_mu
    const Covector3 inner = star_wedge_upper(jd.chi, xi_mu, mu_hat.mat());
    const Covector3 nu(0.0, 0.0, 1.0);
    const cplx nu_xi_mu = (mu_hat.mat().cast<cplx>() * xi_mu)(2);
    const Covector3 coeff = star_wedge_upper(nu, inner, mu_hat.mat()) * nu_xi_mu;
    maps.coeff_min = std::min(maps.coeff_min, coeff.norm());

    for (int l = 0; l < 3; ++l) {
      const double u0 = mu_inv(l, 1);
      const double u1 = -mu_inv(l, 0);
      // unknown order: e00, e01, e11, e02, e12 (j~ tangential, b full)
      const cplx cs[5] = {u0 * w(0), u0 * w(1) + u1 * w(0), u1 * w(1), u0 * w(2),
                          u1 * w(2)};
      for (int u = 0; u < 5; ++u) {
        maps.stage1(row, u) = cs[u].real();
        maps.stage1(row + 1, u) = cs[u].imag();
      }
      maps.stage2(row, 0) = coeff(l).real();
      maps.stage2(row + 1, 0) = coeff(l).imag();
      row += 2;
    }
  }
  return maps;
}

namespace {

Eigen::MatrixXcd sylvester_operator(const SymbolSet& s, const TangentialCovector& xi,
                                    const Mat3c& b1) {
  const Mat3c m = s.T().inverse() * s.A(xi) + b1;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(9, 9);
  // vec(M Z + Z B) = (I (x) M + B^T (x) I) vec Z, column-major vec
  for (int i = 0; i < 3; ++i)
    op.block<3, 3>(3 * i, 3 * i) += m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      op.block<3, 3>(3 * i, 3 * j) += b1(j, i) * Mat3c::Identity();
  return op;
}

}  // namespace

double sylvester_min_singular_value(const SymbolSet& s, const TangentialCovector& xi,
                                    const Mat3c& b1) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sylvester_operator(s, xi, b1));
  return svd.singularValues().tail(1)(0);
}

double sylvester_max_singular_value(const SymbolSet& s, const TangentialCovector& xi,
                                    const Mat3c& b1) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sylvester_operator(s, xi, b1));
  return svd.singularValues()(0);
}

std::vector<TangentialCovector> direction_grid(int n) {
  std::vector<TangentialCovector> grid;
  grid.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double th = std::numbers::pi * k / n;  // half circle avoids +/- duplicates
    grid.emplace_back(std::cos(th), std::sin(th));
  }
  return grid;
}

}  // namespace maxsym
