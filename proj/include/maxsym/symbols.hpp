#ifndef MAXSYM_SYMBOLS_HPP
#define MAXSYM_SYMBOLS_HPP

#include <array>
#include <functional>
#include <vector>

#include "maxsym/tensor.hpp"

namespace maxsym {

struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct near_degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct contour_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Metric entries together with the chart derivatives entering the operator
//! coefficients: all first derivatives, the (symmetric) second derivatives,
//! and higher pure-normal derivatives for jet-level work.
struct MetricJet {
  Metric3 value;
  std::array<Mat3, 3> d1{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  std::array<Mat3, 6> d2{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(),
                         Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  std::vector<Mat3> dn_hi;  // d^k/dx3^k for k >= 3

  static int pack2(int a, int b);
  const Mat3& d2_at(int a, int b) const { return d2[pack2(a, b)]; }
  Mat3& d2_at(int a, int b) { return d2[pack2(a, b)]; }
  const Mat3& d_tangential(int i) const { return d1[i]; }  // i = 0, 1
  Mat3 d_normal(int k) const;                              // k >= 1

  static MetricJet constant(const Metric3& value);
  void validate() const;  // symmetry of all derivative matrices
};

//! Taylor evaluation of the jet as a metric field around the base point.
Metric3 jet_eval(const MetricJet& jet, const Vec3& x);
//! Jet of the Taylor field re-centred at (0, 0, x3).
MetricJet jet_shift_normal(const MetricJet& jet, double x3);

//! Coefficient symbols of the decoupled second-order operator for one side
//! of the system. For the magnetic-field side pass (eps_jet, mu_jet); the
//! electric-field side swaps the two roles.
class SymbolSet {
 public:
  SymbolSet(const MetricJet& eps_jet, const MetricJet& mu_jet, double omega);

  const Mat3c& T() const { return t_; }
  const Mat3c& G() const { return g_; }
  const Mat3c& R() const { return r_; }
  Mat3c A(const TangentialCovector& xi) const;
  Mat3c Q(const TangentialCovector& xi) const;
  Mat3c F(const TangentialCovector& xi) const;

  const Mat3& eps() const { return eps_; }
  const Mat3& mu() const { return mu_; }
  const Mat3& eps_inv() const { return eps_inv_; }
  double density_ratio() const { return rho_; }  // sqrt|mu^-1| / sqrt|eps^-1|
  double omega() const { return omega_; }
  Metric3 eps_metric() const { return Metric3(eps_); }
  Metric3 mu_metric() const { return Metric3(mu_); }

 private:
  Mat3 eps_, mu_, eps_inv_;
  std::array<Mat3, 3> dmu_, deps_inv_;
  Vec3 w_mu_;  // density-weighted divergence of mu
  double rho_, omega_;
  Mat3c t_, g_, r_;
};

SymbolSet coefficient_symbols(const MetricJet& eps_jet, const MetricJet& mu_jet,
                              double omega);

//! M(xi3) = T xi3^2 + A(xi~) xi3 + Q(xi~).
Mat3c matrix_polynomial(const SymbolSet& s, const TangentialCovector& xi, cplx xi3);

//! Root of m^{ab} xi_a xi_b = 0 in xi_3 with positive imaginary part.
cplx positive_imag_root(const Metric3& m, const TangentialCovector& xi);

//! (xi_eps3, xi_mu3): the two distinguished eigenvalues of M.
std::pair<cplx, cplx> eigenvalues(const Metric3& eps_hat, const Metric3& mu_hat,
                                  const TangentialCovector& xi);

//! All six roots of det M(xi3) = 0 via the companion linearisation.
std::array<cplx, 6> det_roots(const SymbolSet& s, const TangentialCovector& xi);

//! Eigenvalue/eigenvector/chain data of the matrix polynomial.
struct JordanData {
  cplx xi_eps3{};
  cplx xi_mu3{};
  Covector3 chi;      // eigenvector at xi_eps3 (unnormalised)
  Covector3 xi_mu;    // eigenvector at xi_mu3
  Covector3 zeta_mu;  // eps^{-1} mu applied to xi_mu
  cplx m_coeff{};     // generalised-eigenvector coefficient
  Covector3 gamma;    // nu + m_coeff zeta_mu
  Mat3c X;            // columns normalised to unit Euclidean length
  Mat3c J;            // block upper-triangular, chain entry rescaled to match X
};

//! Throws degenerate_error when |xi_eps3 - xi_mu3| < 1e-8 |xi~|.
JordanData jordan_data(const Metric3& eps_hat, const Metric3& mu_hat,
                       const TangentialCovector& xi);

//! X J X^{-1}; throws near_degenerate_error when cond(X) > 1e8.
Mat3c principal_B_jordan(const JordanData& jd);

//! Contour-integral route: moment ratio over a circle enclosing exactly the
//! positive-imaginary-part eigenvalues; trapezoid with N nodes.
Mat3c principal_B_contour(const SymbolSet& s, const TangentialCovector& xi,
                          int nodes = 256);

//! Jordan route with automatic contour fallback near degeneracy.
Mat3c principal_B(const SymbolSet& s, const TangentialCovector& xi);

//! Left factor solved from the xi3^1 coefficient of the factorisation.
Mat3c left_factor_matched(const SymbolSet& s, const TangentialCovector& xi,
                          const Mat3c& b1);

struct FactorizationResidual {
  double max_over_xi3 = 0.0;  // worst |M - (I xi3 - B*) T (I xi3 - B)| sampled
  double q_identity = 0.0;    // |Q - B* T B|
  double scale = 1.0;
};
FactorizationResidual factorization_residual(const SymbolSet& s,
                                             const TangentialCovector& xi,
                                             const Mat3c& b1,
                                             const std::vector<cplx>& xi3_samples);

//! Jets of both metrics along the normal line (closed-form field).
using JetLine = std::function<std::pair<MetricJet, MetricJet>(double)>;

struct RiccatiResidual {
  double order2 = 0.0;       // |T B^2 + A B + Q|, must vanish pointwise
  double lower_order = 0.0;  // |T D3 B + G B + F + R|, reported only
  double scale = 1.0;
};
//! Evaluates the full Riccati expression on an x3 grid with a central
//! finite difference for D3 of the principal symbol.
RiccatiResidual riccati_full_residual(const JetLine& line, const TangentialCovector& xi,
                                      const std::vector<double>& x3_grid, double omega);

}  // namespace maxsym

#endif
