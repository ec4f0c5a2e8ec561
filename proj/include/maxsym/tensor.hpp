#ifndef MAXSYM_TENSOR_HPP
#define MAXSYM_TENSOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace maxsym {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;
using Mat3c = Eigen::Matrix3cd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec2c = Eigen::Vector2cd;
using Vec3c = Eigen::Vector3cd;

//! Complex covector components in a fixed boundary chart.
using Covector3 = Vec3c;
//! The (xi_1, xi_2) tangential part of a covector; real throughout the sampling we do.
using TangentialCovector = Vec2;

constexpr cplx iu{0.0, 1.0};

//! Alternating symbol sigma^{ijk} = sigma_{ijk}, 0-based indices.
int levi_civita(int i, int j, int k);

//! Coefficients of a complex 2-form in the cyclic basis (dx2^dx3, dx3^dx1, dx1^dx2).
struct TwoForm3 {
  Vec3c c = Vec3c::Zero();
};

struct invalid_metric : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

//! Symmetric positive definite 3x3 bilinear form in chart components.
//!
//! The same container holds (2,0)-tensors (metrics on covectors such as
//! eps_hat, mu_hat) and (0,2)-tensors (Riemannian metrics such as g); the
//! operation consuming it fixes the interpretation.
class Metric3 {
 public:
  Metric3() : m_(Mat3::Identity()) {}
  explicit Metric3(const Mat3& m) : m_(m) { validate(); }

  static Metric3 identity() { return Metric3(); }

  const Mat3& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double det() const { return m_.determinant(); }
  Metric3 inverse() const { return Metric3(Mat3(m_.inverse())); }

 private:
  void validate() const;
  Mat3 m_;
};

//! <a, b>_m = m^{ij} a_i b_j with m a (2,0)-metric. No conjugation; bilinear
//! in both slots, so it can vanish for nonzero complex arguments.
cplx bilinear_form(const Covector3& a, const Covector3& b, const Metric3& m);
cplx bilinear_form(const Covector3& a, const Covector3& b, const Mat3& m_upper);

//! Tangential contraction m2^{ab} a_a b_b with a 2x2 (2,0)-block.
cplx bilinear_form2(const Vec2c& a, const Vec2c& b, const Mat2& m2_upper);

//! Wedge of two 1-forms; cyclic coefficients (a2 b3 - a3 b2, ...).
TwoForm3 wedge(const Covector3& a, const Covector3& b);

//! Coefficient of dx1^dx2^dx3 in a ^ w for a 1-form a and 2-form w.
cplx wedge_volume(const Covector3& a, const TwoForm3& w);

//! Tangential wedge coefficient a_1 b_2 - a_2 b_1 of a ^ b on the boundary.
cplx wedge2(const Vec2c& a, const Vec2c& b);

//! Hodge star of a 1-form with respect to the Riemannian ((0,2)) metric g,
//! normalised so that a ^ (*a) = |a|^2_g dV_g with dV_g = sqrt(det g) dx^123.
TwoForm3 hodge_star_1form(const Covector3& a, const Metric3& g_lower);

//! Inverse star: 2-form back to 1-form, ** = id.
Covector3 hodge_star_2form(const TwoForm3& w, const Metric3& g_lower);

//! Star of a 1-form wedge with respect to a (2,0)-metric M (chi = *_M (a^b)).
Covector3 star_wedge_upper(const Covector3& a, const Covector3& b, const Mat3& m_upper);

//! 2d Hodge star on the boundary, metric given as the 2x2 (2,0)-block.
//! On the area coefficient s of s dx1^dx2 it returns s sqrt(det m2).
cplx boundary_hodge_area(cplx s, const Mat2& m2_upper);

//! On a tangential covector it returns xi_perp with <xi, xi_perp>_m2 = 0 and
//! xi ^ xi_perp = |xi|^2_m2 dv_m2.
Vec2c boundary_hodge_covector(const Vec2c& xi, const Mat2& m2_upper);
Vec2 boundary_hodge_covector(const Vec2& xi, const Mat2& m2_upper);

//! Residual of the cofactor identity
//!   sigma^{aqj} sigma^{dkb} g_{bj} = det(g) (g^{ad} g^{qk} - g^{ak} g^{qd})
//! for a Riemannian metric g; exact zero in real arithmetic.
double check_cofactor_identity(const Metric3& g_lower);

//! Residual of det(g^{-1}) sigma^{pqr} = sigma_{ijk} g^{pi} g^{qj} g^{rk}.
double check_det_inverse_identity(const Metric3& g_lower);

enum class IndexMode { Raise, Lower };

//! Index shuffling of a (1,1)-tensor against the Riemannian metric g:
//! Raise gives t^{ij} = g^{ik} t_k^j, Lower gives g_{ik} t^{kj}.
Mat3 raise_lower(const Mat3& t, const Metric3& g_lower, IndexMode mode);

//! max |entries|, floored at 1; used to scale residual tolerances.
double norm_scale(const Mat3& m);

bool is_spd2(const Mat2& m, double tol = 1e-12);

}  // namespace maxsym

#endif
