#ifndef MAXSYM_RECOVERY_HPP
#define MAXSYM_RECOVERY_HPP

#include <functional>
#include <vector>

#include "maxsym/boundary.hpp"
#include "maxsym/symbols.hpp"
#include "maxsym/tensor.hpp"

namespace maxsym {

struct inconsistent_data : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Observed boundary data: the impedance (or admittance) principal symbol
//! sampled at F = rot(xi~), either from a forward model or a table.
struct SymbolSampler {
  std::function<Covector3(const TangentialCovector&)> lambda_rot;
  double omega = 1.0;
};

SymbolSampler forward_impedance_sampler(const Metric3& eps_hat, double omega);
SymbolSampler forward_admittance_sampler(const Metric3& mu_hat, double omega);

//! Tabulated sampler on a direction grid; directions are matched by angle
//! and rescaled by degree-1 homogeneity.
struct SymbolTable {
  std::vector<TangentialCovector> directions;
  std::vector<Covector3> values;  // lambda at F = rot(direction)
  double omega = 1.0;
};
SymbolSampler table_sampler(const SymbolTable& table);

//! Tangential metric recovered from three non-collinear impedance samples:
//! the symbol magnitude gives q(xi)^2 = det(eps~^{-1}) |xi|^2_eps~, whose
//! quadratic form Q satisfies eps~ = Q / det Q.
Mat2 recover_tangential(const SymbolSampler& sampler);
//! Admittance counterpart (recovers mu~).
Mat2 recover_tangential_mu(const SymbolSampler& sampler);

struct MultiplesResult {
  bool multiple = false;
  double factor = 0.0;  // a with mu~ = a eps~ when multiple
};
MultiplesResult multiples_test(const Mat2& eps_t, const Mat2& mu_t, double tol);

enum class NormalVerdict { Equal, ProportionalWithFactor, Inconsistent };

struct NormalMuReport {
  NormalVerdict verdict = NormalVerdict::Inconsistent;
  double factor = 1.0;        // c with mu'^{3j~} = c mu^{3j~}
  double mu33_prime = 0.0;    // candidate's normal-normal entry
  double max_residual = 0.0;  // worst cross-pair identity residual over grid
};

//! Decide whether two normal-component candidates produce the same boundary
//! data: Equal, proportional (multiples case), or Inconsistent.
NormalMuReport recover_normal_mu(const Mat2& eps_t, const Mat2& mu_t,
                                 const NormalComponents& nc,
                                 const NormalComponents& nc_prime,
                                 const std::vector<TangentialCovector>& grid,
                                 double tol = 1e-9);

//! The mu33' making (c mu^{3j~}, mu33') boundary-equivalent to nc in the
//! multiples case mu~ = a eps~; used to construct consistent test pairs.
double compensated_mu33(double a, double mu33, double c);

//! Normal-derivative perturbation at order kappa; r_eps, r_mu are derived
//! from the determinant expansion.
struct JetPerturbation {
  int kappa = 1;
  Mat3 e_eps = Mat3::Zero();
  Mat3 e_mu = Mat3::Zero();
  double r_eps = 0.0;
  double r_mu = 0.0;
};
//! First-order coefficient of sqrt(det m^{-1}) under m -> m + x3^k e.
double derived_sqrt_det_rate(const Metric3& base, const Mat3& e);

//! Builds the perturbation with r_eps, r_mu filled from the bases.
JetPerturbation make_jet_perturbation(int kappa, const Mat3& e_eps, const Mat3& e_mu,
                                      const Metric3& base_eps, const Metric3& base_mu);
//! Consistency defect of the stored r values against the derived ones.
double jet_perturbation_defect(const JetPerturbation& pert, const Metric3& base_eps,
                               const Metric3& base_mu);

//! Stacked real matrix mapping the tangential block (e00, e01, e11) of the
//! eps-side perturbation to the boundary-symbol residuals over the grid;
//! trivial kernel certifies recovery of the kappa-th normal derivative.
Eigen::MatrixXd jet_residual_H_map(const Metric3& eps_hat, const Metric3& mu_hat,
                                   const std::vector<TangentialCovector>& grid,
                                   int kappa);

struct JetResidualE {
  Eigen::MatrixXd stage1;   // maps (e00, e01, e11, e02, e12)
  Eigen::MatrixXd stage2;   // maps (e22)
  double coeff_min = 0.0;   // smallest stage-2 coefficient magnitude on grid
};
JetResidualE jet_residual_E_map(const Metric3& eps_hat, const Metric3& mu_hat,
                                const std::vector<TangentialCovector>& grid,
                                int kappa);

//! Smallest singular value of Z -> (T^{-1}A + B) Z + Z B as a 9x9 operator;
//! positivity certifies the uniqueness step of the jet induction.
double sylvester_min_singular_value(const SymbolSet& s, const TangentialCovector& xi,
                                    const Mat3c& b1);
//! Largest singular value, for relative thresholds.
double sylvester_max_singular_value(const SymbolSet& s, const TangentialCovector& xi,
                                    const Mat3c& b1);

//! Equispaced unit directions on the tangential circle.
std::vector<TangentialCovector> direction_grid(int n);

}  // namespace maxsym

#endif
