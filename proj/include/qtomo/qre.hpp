#pragma once

#include "qtomo/hermitian.hpp"

namespace qtomo {

// Reference state for the entropy penalty.  Holds the full-rank prior
// together with its matrix logarithm; floor_eps is the spectral offset the
// solvers add before taking logs of iterates.
struct QreContext {
  HermitianMatrix prior;
  HermitianMatrix log_prior;
  double floor_eps = 1e-10;
};

// Builds the context, computing ln(prior).  Requires every eigenvalue of
// the prior to be >= 1e-14 and checks that exp(log_prior) reproduces the
// prior to 1e-9 Frobenius.
QreContext make_qre_context(const HermitianMatrix& prior,
                            double floor_eps = 1e-10);

// Relative entropy tr(prior - rho + rho ln rho - rho ln prior) with
// t ln t extended by 0 at t = 0.  Eigenvalues of rho in
// (-1e-12*||rho||_F, 0) are clipped to zero; anything more negative makes
// the value +infinity (outside the PSD cone).
double qkl_value(const HermitianMatrix& rho, const QreContext& ctx);

// ln(rho) - ln(prior); throws std::domain_error when rho is singular (the
// subdifferential is empty there).
HermitianMatrix qkl_subgrad(const HermitianMatrix& rho,
                            const QreContext& ctx);

// Convex conjugate tr(exp(sigma + ln prior) - prior).  Throws when the top
// eigenvalue of sigma + ln prior exceeds 700 (exp overflow).
double qkl_conjugate(const HermitianMatrix& sigma, const QreContext& ctx);

// Gradient of the conjugate: exp(sigma + ln prior).
HermitianMatrix qkl_conj_grad(const HermitianMatrix& sigma,
                              const QreContext& ctx);

// prox_{tau*QKL(.,prior)}(sigma) = tau * ginv(sigma/tau + ln prior
// - ln(tau) I) evaluated spectrally; output is positive definite.
HermitianMatrix qkl_prox(const HermitianMatrix& sigma, double tau,
                         const QreContext& ctx);

// Same map, but the internal eigendecomposition can be seeded with the
// basis from a previous call (hint) and exported (eig_out) so iterative
// solvers pay near-diagonal Jacobi cost per step.  Either pointer may be
// null.
HermitianMatrix qkl_prox_hinted(const HermitianMatrix& sigma, double tau,
                                const QreContext& ctx,
                                const EigenSystem* hint,
                                EigenSystem* eig_out);

// prox of the conjugate via sigma - ginv(sigma + ln prior + ln(tau) I);
// agrees with the Moreau identity against qkl_prox.
HermitianMatrix qkl_conj_prox(const HermitianMatrix& sigma, double tau,
                              const QreContext& ctx);

// True iff all eigenvalues of rho are <= 1/mu + 1e-12, the region where the
// entropy term is strongly convex with parameter mu.
bool convexity_region_check(const HermitianMatrix& rho, double mu);

} // namespace qtomo
