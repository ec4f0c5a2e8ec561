#ifndef MAXSYM_BOUNDARY_HPP
#define MAXSYM_BOUNDARY_HPP

#include "maxsym/symbols.hpp"
#include "maxsym/tensor.hpp"

namespace maxsym {

//! Principal symbol of the impedance map applied to boundary data F:
//!   -xi~ *_{i*eps}(xi~ ^ F) / (omega <nu_eps, xi_eps>_eps),
//! a tangential covector parallel to xi~. eps_hat may be given in any
//! boundary chart; only its invariant tangential block enters.
Covector3 impedance_principal(const Metric3& eps_hat, const TangentialCovector& xi,
                              const Covector3& F, double omega);

//! Admittance counterpart (opposite sign, mu~ data).
Covector3 admittance_principal(const Metric3& mu_hat, const TangentialCovector& xi,
                               const Covector3& G, double omega);

//! Principal symbol of a field decomposed in the eigenvector basis.
struct FieldSymbol {
  cplx a_coeff{};
  cplx b_coeff{};
  Covector3 value;  // a * chi + b * xi-eigenvector, chart components
};

//! H^(0) for the magnetic side: chi of eps_hat and the mu_hat eigenvector.
FieldSymbol field_symbol_H(const Metric3& eps_hat, const Metric3& mu_hat,
                           const TangentialCovector& xi, const Covector3& F);

//! E^(0): the same construction with the two metrics exchanged.
FieldSymbol field_symbol_E(const Metric3& eps_hat, const Metric3& mu_hat,
                           const TangentialCovector& xi, const Covector3& G);

//! Principal symbol of the divergence constraint applied to a field symbol;
//! vanishes on the physical decomposition.
cplx divergence_residual(const Metric3& mu_hat, const Mat3c& b1,
                         const TangentialCovector& xi, const Covector3& h0);

//! Normal component of E^(0)(G) via the two-term boundary formula
//! (chi_mu / |xi|_mu |xi|_eps (xi_mu3 + xi_eps3)) *_{i*mu}(xi~ ^ G) + ...
//! evaluated with eps_hat in boundary normal form.
cplx normal_E_symbol(const Metric3& eps_hat, const Metric3& mu_hat,
                     const TangentialCovector& xi, const Covector3& G);

// ---- closed forms for the normal components in the two charts -------------

//! Normal data of mu_hat expressed in eps-boundary-normal coordinates.
struct NormalComponents {
  Vec2 mu_n = Vec2::Zero();  // (mu^{31}, mu^{32})
  double mu33 = 1.0;
};

//! Assemble the full (2,0)-matrix of mu_hat in the eps chart from its own
//! tangential block and the normal components.
Metric3 assemble_mu_in_eps_chart(const Mat2& mu_tilde, const NormalComponents& nc);

//! Closed forms for the normal components of the eigen-covectors in the two
//! charts (inputs are the invariant tangential blocks plus normal data).
cplx xi3_eps_in_eps(const Mat2& eps_t, const TangentialCovector& xi);
cplx xi3_mu_in_mu(const Mat2& mu_t, const TangentialCovector& xi);
cplx xi3_mu_in_eps(const Mat2& mu_t, const NormalComponents& nc,
                   const TangentialCovector& xi);
cplx xi3_eps_in_mu(const Mat2& eps_t, const NormalComponents& nc,
                   const TangentialCovector& xi);

//! chi_mu and chi_eps normal components, eps chart resp. mu chart.
cplx chi3_mu_in_eps(const Mat2& eps_t, const Mat2& mu_t, const NormalComponents& nc,
                    const TangentialCovector& xi);
cplx chi3_eps_in_mu(const Mat2& eps_t, const Mat2& mu_t, const NormalComponents& nc,
                    const TangentialCovector& xi);

//! Residual of the cross-pair identity
//! (xi_mu'3 + xi_eps3) chi_mu3 = (xi_mu3 + xi_eps3) chi_mu'3
//! normalised by the magnitude of its two sides.
double boundary_pair_residual(const Mat2& eps_t, const Mat2& mu_t,
                              const NormalComponents& nc,
                              const NormalComponents& nc_prime,
                              const TangentialCovector& xi);

}  // namespace maxsym

#endif
