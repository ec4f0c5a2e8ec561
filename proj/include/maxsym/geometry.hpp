#ifndef MAXSYM_GEOMETRY_HPP
#define MAXSYM_GEOMETRY_HPP

#include <functional>

#include "maxsym/tensor.hpp"

namespace maxsym {

//! Anisotropic material data: (1,1)-tensor components of epsilon and mu,
//! the Riemannian metric g, and the angular frequency.
struct ParameterTriple {
  Mat3 epsilon = Mat3::Identity();
  Mat3 mu = Mat3::Identity();
  Metric3 g;
  double omega = 1.0;
};

//! Validates that g*eps and g*mu are SPD and omega > 0.
void validate_triple(const ParameterTriple& p);

//! The conformally normalised (2,0)-metrics induced by (epsilon, mu, g).
struct HatPair {
  Metric3 eps_hat;
  Metric3 mu_hat;
};

//! Solve eps_hat^{-1}/sqrt(det eps_hat^{-1}) = (eps^{-1})_flat/sqrt(det g)
//! for eps_hat (and likewise mu_hat). With A the right-hand side, the unique
//! SPD solution is eps_hat^{-1} = A/det(A).
HatPair build_hat_pair(const ParameterTriple& p);

//! Chart data putting a (2,0)-metric into block form blockdiag(2x2, 1).
struct BoundaryChart {
  Mat3 jacobian = Mat3::Identity();          // J with J m J^T = blockdiag
  Mat2 eps_tilde = Mat2::Identity();         // tangential block after reduction
  Metric3 companion_bnc;                     // companion metric in the new chart
};

//! Reduce eps_hat to blockdiag(eps_tilde, 1) at the point and push the
//! companion metric into the same chart. The Jacobian keeps the tangential
//! identity block, third column fixed by the normal components.
BoundaryChart to_boundary_normal(const Metric3& eps_hat, const Metric3& companion);

//! Congruence J m J^T for (2,0)-tensor components under the chart change J.
Metric3 pushforward_metric(const Metric3& m, const Mat3& jac);

//! Covariant congruence J^T m J ((0,2)-components; pullback direction).
Metric3 pullback_metric02(const Metric3& m, const Mat3& jac);

//! Tangential 2x2 block of the (2,0)-metric m in its own boundary normal
//! coordinates (Schur complement against the normal components).
Mat2 tangential_block(const Metric3& m);

// --------------------------------------------------------------------------
// smooth bump machinery

//! C^inf plateau bump: even, values in [0,1], equal to 1 on |s| <= 1/3,
//! supported in (-2/3, 2/3), unit integral.
double plateau_bump(double s);
double plateau_bump_derivative(double s);
//! Half-width of the region where plateau_bump == 1.
double plateau_bump_flat_radius();

//! Scalar field on the chart together with its tangential derivatives.
struct ScalarField {
  std::function<double(const Vec3&)> value;
  std::function<double(const Vec3&)> d1;  // d/dx1
  std::function<double(const Vec3&)> d2;  // d/dx2
};

//! h = 1 + amplitude * prod_i plateau_bump((x_i - center_i)/width_i).
ScalarField bump_field(double amplitude, const Vec3& center, const Vec3& width);
ScalarField constant_field();

//! Boundary-fixing diffeomorphism Phi(x) = (x1, x2, f(x1,x2,x3)) whose
//! Jacobian determinant equals a prescribed positive h for small x3.
class GaugeMap {
 public:
  //! h must satisfy supp(h-1) inside [-eps,eps]^2 x [0,eps] and h > 0.
  GaugeMap(ScalarField h, double epsilon_supp, double sup_h);

  Vec3 phi(const Vec3& x) const;
  Mat3 dphi(const Vec3& x) const;
  //! det DPhi = df/dx3, available in closed form (no quadrature).
  double det_dphi(const Vec3& x) const;
  //! x3 below this value guarantees det DPhi(x) == h(x).
  double plateau_threshold() const { return threshold_; }

  double f(const Vec3& x) const;
  double const_a() const { return a_; }
  double const_b() const { return b_; }
  double const_c() const { return c_; }
  double d_coeff(double x1, double x2) const;

 private:
  ScalarField h_;
  double eps_;
  double a_, b_, c_;
  double threshold_;
};

//! Constructs the Lemma machinery: a = 4 sup(h+1) + 3, b, c and the
//! compensating coefficient d by quadrature; rejects invalid h.
GaugeMap build_gauge_map(const ScalarField& h, double epsilon_supp, double sup_h);

//! A (2,0)-metric field on the chart (closed form; value-level evaluation).
using MetricFieldFn = std::function<Metric3(const Vec3&)>;

//! Pull back a pair of (2,0)-metric fields through the gauge map:
//! eps_hat(x) = DPhi(x)^{-1} eps_hat'(Phi(x)) DPhi(x)^{-T}.
struct PulledBackPair {
  MetricFieldFn eps_hat;
  MetricFieldFn mu_hat;
};
PulledBackPair pullback_parameters(const MetricFieldFn& eps_prime,
                                   const MetricFieldFn& mu_prime,
                                   const GaugeMap& gauge);

//! Adaptive Gauss-Kronrod quadrature on [a, b], absolute tolerance 1e-12.
double integrate(const std::function<double(double)>& fn, double a, double b);

}  // namespace maxsym

#endif
