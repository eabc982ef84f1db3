#pragma once

#include <string>
#include <vector>

#include "qtomo/data_fidelity.hpp"
#include "qtomo/forward_model.hpp"
#include "qtomo/qre.hpp"

namespace qtomo {

enum class StopReason { gap, max_iters };

const char* stop_reason_name(StopReason r);

struct SolverConfig {
  double alpha = 1.0;           // penalty weight, > 0
  double mu = 0.5;              // assumed strong-convexity parameter
  double gap_threshold = 1e-6;  // stop once the duality gap falls below
  long long max_iters = 2'000'000;
  double tau0 = 0.0;            // primal step; <= 0 picks the default
  double nu0 = 0.0;             // dual step (Chambolle-Pock); <= 0 default
  long long gap_check_stride = 50;
  double floor_eps = 1e-10;     // spectral offset for gap evaluations
};

struct SolverReport {
  HermitianMatrix solution;
  long long iterations = 0;
  double final_gap = 0.0;
  // primal objective (fidelity/alpha + penalty) sampled at every gap check
  std::vector<double> objective_history;
  StopReason stop_reason = StopReason::max_iters;
  double wall_time = 0.0;  // seconds
};

// Certified distance bound: for any rho and the dual point induced by the
// fidelity gradient at T rho,
//   QKL(rho, rho_solution) <= fidelity(T rho)/alpha + QKL(rho, prior)
//                             + conj_fidelity(-alpha ghat)/alpha
//                             + conj_QKL(T* ghat).
// rho is floored by ctx.floor_eps first; domain violations (zero predictions
// against positive counts, conjugate overflow) yield +infinity.
double duality_gap(const HermitianMatrix& rho, const ForwardModel& model,
                   const DataGrid& g_obs, const QreContext& ctx,
                   Fidelity kind, double alpha);

// Accelerated proximal gradient iteration for the squared-distance fidelity:
// momentum extrapolation, gradient step through the model, entropy prox.
// Starts from the prior; requires tau < 1/norm_bound.
SolverReport fista_solve(const ForwardModel& model, const DataGrid& g_obs,
                         const QreContext& ctx, const SolverConfig& cfg);

// Accelerated primal-dual iteration handling both fidelities through the
// dual prox; step sizes rebalance by beta = (1 + 2 mu tau)^(-1/2) each
// round.  Starts from the prior and a zero dual; requires
// tau0*nu0*norm_bound <= 1.
SolverReport cp_solve(const ForwardModel& model, const DataGrid& g_obs,
                      const QreContext& ctx, Fidelity kind,
                      const SolverConfig& cfg);

} // namespace qtomo
