#include "maxsym/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace maxsym {

void validate_triple(const ParameterTriple& p) {
  if (p.omega <= 0.0) throw std::invalid_argument("omega must be positive");
  // symmetry/positivity of eps, mu with respect to g <=> g*eps, g*mu SPD
  Metric3{Mat3(p.g.mat() * p.epsilon)};
  Metric3{Mat3(p.g.mat() * p.mu)};
}

namespace {

Metric3 hat_from_ratio(const Mat3& param_inv_flat, double sqrt_det_g) {
  const Mat3 ratio = param_inv_flat / sqrt_det_g;
  // X / sqrt(det X) = ratio forces det X = det(ratio)^{-2}, hence
  // X = ratio / det(ratio).
  const Mat3 hat_inv = ratio / ratio.determinant();
  return Metric3(Mat3(hat_inv.inverse()));
}

}  // namespace

HatPair build_hat_pair(const ParameterTriple& p) {
  validate_triple(p);
  const double sg = std::sqrt(p.g.det());
  const Mat3 eps_inv_flat = p.g.mat() * p.epsilon.inverse();
  const Mat3 mu_inv_flat = p.g.mat() * p.mu.inverse();
  return HatPair{hat_from_ratio(eps_inv_flat, sg), hat_from_ratio(mu_inv_flat, sg)};
}

Mat2 tangential_block(const Metric3& m) {
  const Mat3& a = m.mat();
  Mat2 t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t(i, j) = a(i, j) - a(i, 2) * a(j, 2) / a(2, 2);
  return t;
}

BoundaryChart to_boundary_normal(const Metric3& eps_hat, const Metric3& companion) {
  const Mat3& e = eps_hat.mat();
  Mat3 jac = Mat3::Identity();
  jac(0, 2) = -e(0, 2) / e(2, 2);
  jac(1, 2) = -e(1, 2) / e(2, 2);
  jac(2, 2) = 1.0 / std::sqrt(e(2, 2));
  BoundaryChart chart;
  chart.jacobian = jac;
  chart.eps_tilde = tangential_block(eps_hat);
  chart.companion_bnc = pushforward_metric(companion, jac);
  return chart;
}

Metric3 pushforward_metric(const Metric3& m, const Mat3& jac) {
  if (std::abs(jac.determinant()) < 1e-14)
    throw std::invalid_argument("singular chart Jacobian");
  return Metric3(Mat3(jac * m.mat() * jac.transpose()));
}

Metric3 pullback_metric02(const Metric3& m, const Mat3& jac) {
  if (std::abs(jac.determinant()) < 1e-14)
    throw std::invalid_argument("singular chart Jacobian");
  return Metric3(Mat3(jac.transpose() * m.mat() * jac));
}

// --------------------------------------------------------------------------

namespace {

// C^inf step: 0 at u<=0, 1 at u>=1, s(u) + s(1-u) = 1.
double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double fa = std::exp(-1.0 / u);
  const double fb = std::exp(-1.0 / (1.0 - u));
  return fa / (fa + fb);
}

double smoothstep_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double fa = std::exp(-1.0 / u);
  const double fb = std::exp(-1.0 / (1.0 - u));
  const double dfa = fa / (u * u);
  const double dfb = -fb / ((1.0 - u) * (1.0 - u));
  const double denom = fa + fb;
  return (dfa * denom - fa * (dfa + dfb)) / (denom * denom);
}

constexpr double kFlat = 1.0 / 3.0;  // plateau half-width
constexpr double kSupp = 2.0 / 3.0;  // support half-width

}  // namespace

double plateau_bump_flat_radius() { return kFlat; }

double plateau_bump(double s) {
  const double t = std::abs(s);
  if (t <= kFlat) return 1.0;
  if (t >= kSupp) return 0.0;
  // transition scaled so the symmetric halves integrate to (kSupp-kFlat)/2,
  // making the total integral 2*kFlat + (kSupp - kFlat) = 1
  return smoothstep((kSupp - t) / (kSupp - kFlat));
}

double plateau_bump_derivative(double s) {
  const double t = std::abs(s);
  if (t <= kFlat || t >= kSupp) return 0.0;
  const double d = -smoothstep_derivative((kSupp - t) / (kSupp - kFlat)) / (kSupp - kFlat);
  return s > 0 ? d : -d;
}

ScalarField constant_field() {
  return ScalarField{[](const Vec3&) { return 1.0; }, [](const Vec3&) { return 0.0; },
                     [](const Vec3&) { return 0.0; }};
}

ScalarField bump_field(double amplitude, const Vec3& center, const Vec3& width) {
  auto part = [center, width](const Vec3& x, int i) {
    return plateau_bump((x(i) - center(i)) / width(i));
  };
  auto dpart = [center, width](const Vec3& x, int i) {
    return plateau_bump_derivative((x(i) - center(i)) / width(i)) / width(i);
  };
  ScalarField f;
  f.value = [amplitude, part](const Vec3& x) {
    return 1.0 + amplitude * part(x, 0) * part(x, 1) * part(x, 2);
  };
  f.d1 = [amplitude, part, dpart](const Vec3& x) {
    return amplitude * dpart(x, 0) * part(x, 1) * part(x, 2);
  };
  f.d2 = [amplitude, part, dpart](const Vec3& x) {
    return amplitude * part(x, 0) * dpart(x, 1) * part(x, 2);
  };
  return f;
}

double integrate(const std::function<double(double)>& fn, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(fn, a, b, 12, 1e-12);
}

GaugeMap::GaugeMap(ScalarField h, double epsilon_supp, double sup_h)
    : h_(std::move(h)), eps_(epsilon_supp) {
  const double sup_hp1 = sup_h + 1.0;
  a_ = 4.0 * sup_hp1 + 3.0;
  b_ = 2.0 * eps_ / a_ * (sup_hp1 + 1.0);
  c_ = 2.0 * eps_ / a_ * sup_hp1;
  // below this x3 the first bump sits on its plateau and the compensating
  // bump has not switched on yet (its support starts at b - c = 2 eps / a)
  threshold_ = std::min(plateau_bump_flat_radius() * eps_ / a_, b_ - c_);
}

double GaugeMap::d_coeff(double x1, double x2) const {
  // supp of the integrand is s in [0, (2/3) eps / a]
  const double hi = kSupp * eps_ / a_;
  auto fn = [&](double s) {
    return (h_.value(Vec3(x1, x2, s)) - 1.0) * plateau_bump(a_ * s / eps_);
  };
  return integrate(fn, 0.0, hi) / c_;
}

double GaugeMap::f(const Vec3& x) const {
  const double d = d_coeff(x(0), x(1));
  auto fn = [&](double s) {
    return (h_.value(Vec3(x(0), x(1), s)) - 1.0) * plateau_bump(a_ * s / eps_) -
           d * plateau_bump((s - b_) / c_) + 1.0;
  };
  return integrate(fn, 0.0, x(2));
}

Vec3 GaugeMap::phi(const Vec3& x) const { return Vec3(x(0), x(1), f(x)); }

double GaugeMap::det_dphi(const Vec3& x) const {
  const double d = d_coeff(x(0), x(1));
  return (h_.value(x) - 1.0) * plateau_bump(a_ * x(2) / eps_) -
         d * plateau_bump((x(2) - b_) / c_) + 1.0;
}

Mat3 GaugeMap::dphi(const Vec3& x) const {
  Mat3 j = Mat3::Identity();
  // df/dx^i by differentiating under the integral; d itself depends on x1, x2
  for (int i = 0; i < 2; ++i) {
    auto dh = (i == 0) ? h_.d1 : h_.d2;
    const double hi_d = kSupp * eps_ / a_;
    const double dd = integrate(
                          [&](double s) {
                            return dh(Vec3(x(0), x(1), s)) * plateau_bump(a_ * s / eps_);
                          },
                          0.0, hi_d) /
                      c_;
    j(2, i) = integrate(
        [&](double s) {
          return dh(Vec3(x(0), x(1), s)) * plateau_bump(a_ * s / eps_) -
                 dd * plateau_bump((s - b_) / c_);
        },
        0.0, x(2));
  }
  j(2, 2) = det_dphi(x);
  return j;
}

GaugeMap build_gauge_map(const ScalarField& h, double epsilon_supp, double sup_h) {
  if (epsilon_supp <= 0.0) throw std::invalid_argument("support extent must be positive");
  if (sup_h <= 0.0) throw std::invalid_argument("h must be positive");
  // spot check positivity and containment of supp(h-1) on a coarse grid
  const int n = 9;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        const Vec3 x((2.0 * i / n - 1.0) * 1.5 * epsilon_supp,
                     (2.0 * j / n - 1.0) * 1.5 * epsilon_supp,
                     1.5 * epsilon_supp * k / n);
        const double v = h.value(x);
        if (v <= 0.0) throw std::invalid_argument("h must be positive");
        const bool inside = std::abs(x(0)) <= epsilon_supp &&
                            std::abs(x(1)) <= epsilon_supp && x(2) <= epsilon_supp;
        if (!inside && std::abs(v - 1.0) > 1e-14)
          throw std::invalid_argument("supp(h-1) escapes the stated box");
      }
  return GaugeMap(h, epsilon_supp, sup_h);
}

PulledBackPair pullback_parameters(const MetricFieldFn& eps_prime,
                                   const MetricFieldFn& mu_prime, const GaugeMap& gauge) {
  auto pull = [&gauge](const MetricFieldFn& field) {
    return MetricFieldFn([&gauge, field](const Vec3& x) {
      const Mat3 j = gauge.dphi(x);
      const Mat3 jinv = j.inverse();
      const Metric3 target = field(gauge.phi(x));
      // (2,0)-components: inverse-Jacobian congruence (the (0,2) form pulls
      // back with DPhi itself)
      return Metric3(Mat3(jinv * target.mat() * jinv.transpose()));
    });
  };
  return PulledBackPair{pull(eps_prime), pull(mu_prime)};
}

}  // namespace maxsym
