#include "maxsym/tensor.hpp"

#include <cmath>

namespace maxsym {

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // parity of the permutation (i j k) of (0 1 2)
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

void Metric3::validate() const {
  const double s = norm_scale(m_);
  if (!m_.allFinite()) throw invalid_metric("metric entries not finite");
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * s)
    throw invalid_metric("metric not symmetric");
  // leading principal minors
  const double m1 = m_(0, 0);
  const double m2 = m_.topLeftCorner<2, 2>().determinant();
  const double m3 = m_.determinant();
  if (m1 <= 1e-12 * s || m2 <= 1e-12 * s * s || m3 <= 1e-12 * s * s * s)
    throw invalid_metric("metric not positive definite");
}

double norm_scale(const Mat3& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

bool is_spd2(const Mat2& m, double tol) {
  const double s = std::max(1.0, m.cwiseAbs().maxCoeff());
  return std::abs(m(0, 1) - m(1, 0)) <= tol * s && m(0, 0) > tol * s &&
         m.determinant() > tol * s * s;
}

cplx bilinear_form(const Covector3& a, const Covector3& b, const Metric3& m) {
  return bilinear_form(a, b, m.mat());
}

cplx bilinear_form(const Covector3& a, const Covector3& b, const Mat3& m_upper) {
  return a.transpose() * m_upper.cast<cplx>() * b;
}

cplx bilinear_form2(const Vec2c& a, const Vec2c& b, const Mat2& m2_upper) {
  return a.transpose() * m2_upper.cast<cplx>() * b;
}

TwoForm3 wedge(const Covector3& a, const Covector3& b) {
  TwoForm3 w;
  w.c(0) = a(1) * b(2) - a(2) * b(1);
  w.c(1) = a(2) * b(0) - a(0) * b(2);
  w.c(2) = a(0) * b(1) - a(1) * b(0);
  return w;
}

cplx wedge_volume(const Covector3& a, const TwoForm3& w) {
  return a(0) * w.c(0) + a(1) * w.c(1) + a(2) * w.c(2);
}

cplx wedge2(const Vec2c& a, const Vec2c& b) {
  return a(0) * b(1) - a(1) * b(0);
}

TwoForm3 hodge_star_1form(const Covector3& a, const Metric3& g_lower) {
  TwoForm3 w;
  w.c = std::sqrt(g_lower.det()) * (g_lower.inverse().mat().cast<cplx>() * a);
  return w;
}

Covector3 hodge_star_2form(const TwoForm3& w, const Metric3& g_lower) {
  return (g_lower.mat().cast<cplx>() * w.c) / std::sqrt(g_lower.det());
}

Covector3 star_wedge_upper(const Covector3& a, const Covector3& b, const Mat3& m_upper) {
  // *_M (a ^ b) for a (2,0)-metric M equals sqrt(det M) M^{-1} (a x b),
  // the cross product taken without conjugation.
  const TwoForm3 w = wedge(a, b);
  return std::sqrt(m_upper.determinant()) * (m_upper.inverse().cast<cplx>() * w.c);
}

cplx boundary_hodge_area(cplx s, const Mat2& m2_upper) {
  if (!is_spd2(m2_upper)) throw invalid_metric("boundary metric not SPD");
  return s * std::sqrt(m2_upper.determinant());
}

Vec2c boundary_hodge_covector(const Vec2c& xi, const Mat2& m2_upper) {
  if (!is_spd2(m2_upper)) throw invalid_metric("boundary metric not SPD");
  const Vec2c raised = m2_upper.cast<cplx>() * xi;
  return Vec2c(-raised(1), raised(0)) / std::sqrt(m2_upper.determinant());
}

Vec2 boundary_hodge_covector(const Vec2& xi, const Mat2& m2_upper) {
  const Vec2c p = boundary_hodge_covector(Vec2c(xi(0), xi(1)), m2_upper);
  return Vec2(p(0).real(), p(1).real());
}

double check_cofactor_identity(const Metric3& g_lower) {
  const Mat3& g = g_lower.mat();
  const Mat3 gi = g_lower.inverse().mat();
  const double detg = g_lower.det();
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int q = 0; q < 3; ++q)
      for (int d = 0; d < 3; ++d)
        for (int k = 0; k < 3; ++k) {
          double lhs = 0.0;
          for (int j = 0; j < 3; ++j)
            for (int b = 0; b < 3; ++b)
              lhs += levi_civita(a, q, j) * levi_civita(d, k, b) * g(b, j);
          const double rhs = detg * (gi(a, d) * gi(q, k) - gi(a, k) * gi(q, d));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

double check_det_inverse_identity(const Metric3& g_lower) {
  const Mat3 gi = g_lower.inverse().mat();
  const double detgi = gi.determinant();
  double worst = 0.0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int r = 0; r < 3; ++r) {
        double rhs = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
              rhs += levi_civita(i, j, k) * gi(p, i) * gi(q, j) * gi(r, k);
        worst = std::max(worst, std::abs(detgi * levi_civita(p, q, r) - rhs));
      }
  return worst;
}

Mat3 raise_lower(const Mat3& t, const Metric3& g_lower, IndexMode mode) {
  if (mode == IndexMode::Raise) return g_lower.inverse().mat() * t;
  return g_lower.mat() * t;
}

}  // namespace maxsym
