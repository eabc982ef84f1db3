#pragma once

#include <string>

#include "qtomo/data_grid.hpp"

namespace qtomo {

enum class Fidelity { l2, kl };

// Value of the data-fit term: for l2, 0.5*sum (f - g_obs)^2; for kl the
// entrywise divergence with the usual case table (+infinity for negative
// entries or f = 0 where g_obs > 0; the entry contributes f where
// g_obs = 0).
double fit_value(Fidelity kind, const DataGrid& g_obs, const DataGrid& f);

// Gradient in f: l2 -> f - g_obs; kl -> 1 - g_obs/f (1 where g_obs = 0).
// For kl, throws std::domain_error when f <= 0 at an entry with g_obs > 0.
DataGrid fit_grad(Fidelity kind, const DataGrid& g_obs, const DataGrid& f);

// Convex conjugate: l2 -> <p, g_obs> + 0.5*||p||^2; kl -> entrywise
// -g_obs*ln(1-p) for g_obs > 0 and p < 1, zero for g_obs = 0 and p <= 1,
// +infinity otherwise (in-band, not an error).
double fit_conjugate(Fidelity kind, const DataGrid& p, const DataGrid& g_obs);

// prox_{nu * fit_conjugate(kind, ., g_obs)}(g_tilde):
//   l2 -> (g_tilde - nu*g_obs) / (1 + nu)
//   kl -> (1+g_tilde)/2 - sqrt(((1-g_tilde)/2)^2 + nu*g_obs) entrywise.
// Throws when the kl radicand drops below -1e-14 (corrupted data).
DataGrid fit_conj_prox(Fidelity kind, const DataGrid& g_tilde, double nu,
                       const DataGrid& g_obs);

// Dual point for the duality gap: -(1/alpha) * fit_grad(kind, g_obs, f).
DataGrid dual_point(Fidelity kind, const DataGrid& g_obs, const DataGrid& f,
                    double alpha);

const char* fidelity_name(Fidelity kind);
Fidelity fidelity_from_name(const std::string& name);

} // namespace qtomo
