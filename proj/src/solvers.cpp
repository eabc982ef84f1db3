#include "qtomo/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_problem(const ForwardModel& model, const DataGrid& g_obs,
                   const QreContext& ctx, const char* where) {
  if (ctx.prior.dim() != model.dim())
    throw std::invalid_argument(std::string(where) +
                                ": prior dimension does not match the model");
  if (g_obs.n_theta != model.n_theta() || g_obs.n_l != model.n_l())
    throw std::invalid_argument(std::string(where) +
                                ": data shape does not match the model");
}

void check_config(const SolverConfig& cfg, const char* where) {
  const std::string w(where);
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha))
    throw std::invalid_argument(w + ": alpha must be positive and finite");
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu))
    throw std::invalid_argument(w + ": mu must be positive and finite");
  if (!(cfg.gap_threshold >= 0.0))
    throw std::invalid_argument(w + ": gap_threshold must be >= 0");
  if (cfg.max_iters < 1)
    throw std::invalid_argument(w + ": max_iters must be >= 1");
  if (cfg.gap_check_stride < 1)
    throw std::invalid_argument(w + ": gap_check_stride must be >= 1");
  if (!(cfg.floor_eps >= 0.0) || !std::isfinite(cfg.floor_eps))
    throw std::invalid_argument(w + ": floor_eps must be >= 0 and finite");
}

// Gap evaluated at an already-floored (positive definite) iterate.  Also
// reports the primal objective fidelity/alpha + penalty.
double gap_core(const HermitianMatrix& rho_fl, const ForwardModel& model,
                const DataGrid& g_obs, const QreContext& ctx, Fidelity kind,
                double alpha, double* primal_out) {
  const DataGrid f = model.apply(rho_fl);
  const double fit = fit_value(kind, g_obs, f);
  const double primal = fit / alpha + qkl_value(rho_fl, ctx);
  if (primal_out != nullptr) *primal_out = primal;
  if (!std::isfinite(primal)) return kInf;

  const DataGrid grad = fit_grad(kind, g_obs, f);
  const DataGrid ghat = grid_lincomb(-1.0 / alpha, grad, 0.0, grad);
  const double conj_fit = fit_conjugate(kind, grad, g_obs);
  if (!std::isfinite(conj_fit)) return kInf;

  double conj_penalty = 0.0;
  try {
    conj_penalty = qkl_conjugate(model.adjoint(ghat), ctx);
  } catch (const std::domain_error&) {
    return kInf;
  }
  const double gap = primal + conj_fit / alpha + conj_penalty;
  return std::isnan(gap) ? kInf : gap;
}

} // namespace

const char* stop_reason_name(StopReason r) {
  return r == StopReason::gap ? "gap" : "max_iters";
}

double duality_gap(const HermitianMatrix& rho, const ForwardModel& model,
                   const DataGrid& g_obs, const QreContext& ctx,
                   Fidelity kind, double alpha) {
  check_problem(model, g_obs, ctx, "duality_gap");
  if (rho.dim() != model.dim())
    throw std::invalid_argument("duality_gap: iterate dimension mismatch");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("duality_gap: alpha must be positive");
  return gap_core(floor_eigenvalues(rho, ctx.floor_eps), model, g_obs, ctx,
                  kind, alpha, nullptr);
}

SolverReport fista_solve(const ForwardModel& model, const DataGrid& g_obs,
                         const QreContext& ctx, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  check_problem(model, g_obs, ctx, "fista_solve");
  check_config(cfg, "fista_solve");
  const double nb = model.norm_bound();
  if (!(nb > 0.0) || !std::isfinite(nb))
    throw std::invalid_argument(
        "fista_solve: model norm bound must be positive and finite");
  const double tau = cfg.tau0 > 0.0 ? cfg.tau0 : 0.9 / nb;
  if (!(tau < 1.0 / nb))
    throw std::invalid_argument(
        "fista_solve: step size must be below 1/norm_bound");

  SolverReport rep;
  rep.final_gap = kInf;
  HermitianMatrix rho = ctx.prior;
  HermitianMatrix rho_prev = rho;
  const double q = tau * cfg.mu / (1.0 + tau * cfg.mu);
  double t = 0.0;
  EigenSystem eig_hint;
  bool have_hint = false;

  long long l = 0;
  StopReason reason = StopReason::max_iters;
  while (l < cfg.max_iters) {
    const double t_next =
        0.5 * (1.0 - q * t * t +
               std::sqrt((1.0 - q * t) * (1.0 - q * t) + 4.0 * t * t));
    const double beta =
        (t - 1.0) / t_next * (1.0 + (1.0 - t_next) * tau * cfg.mu);
    const HermitianMatrix rho_tilde =
        herm_lincomb(1.0 + beta, rho, -beta, rho_prev);
    const DataGrid resid =
        grid_lincomb(1.0, model.apply(rho_tilde), -1.0, g_obs);
    HermitianMatrix sigma = rho_tilde;
    herm_axpy(sigma, -tau, model.adjoint(resid));
    rho_prev = std::move(rho);
    // the hint is dropped periodically so basis drift cannot accumulate
    const EigenSystem* hint =
        (have_hint && (l & 127) != 0) ? &eig_hint : nullptr;
    rho = qkl_prox_hinted(sigma, cfg.alpha * tau, ctx, hint, &eig_hint);
    have_hint = true;
    t = t_next;
    ++l;

    if (l % cfg.gap_check_stride == 0 || l == cfg.max_iters) {
      double primal = 0.0;
      const double gap =
          gap_core(floor_eigenvalues(rho, cfg.floor_eps), model, g_obs, ctx,
                   Fidelity::l2, cfg.alpha, &primal);
      rep.objective_history.push_back(primal);
      rep.final_gap = gap;
      if (gap <= cfg.gap_threshold) {
        reason = StopReason::gap;
        break;
      }
    }
  }

  rep.iterations = l;
  rep.stop_reason = reason;
  rep.solution = std::move(rho);
  rep.wall_time = seconds_since(t0);
  return rep;
}

SolverReport cp_solve(const ForwardModel& model, const DataGrid& g_obs,
                      const QreContext& ctx, Fidelity kind,
                      const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  check_problem(model, g_obs, ctx, "cp_solve");
  check_config(cfg, "cp_solve");
  const double nb = model.norm_bound();
  if (!(nb > 0.0) || !std::isfinite(nb))
    throw std::invalid_argument(
        "cp_solve: model norm bound must be positive and finite");
  double tau = cfg.tau0 > 0.0 ? cfg.tau0 : 1.0 / std::sqrt(nb);
  double nu = cfg.nu0 > 0.0 ? cfg.nu0 : 1.0 / std::sqrt(nb);
  if (tau * nu * nb > 1.0 + 1e-12)
    throw std::invalid_argument(
        "cp_solve: tau0*nu0*norm_bound must not exceed 1");

  SolverReport rep;
  rep.final_gap = kInf;
  HermitianMatrix rho = ctx.prior;
  HermitianMatrix rho_prev = rho;
  HermitianMatrix rho_tilde = rho;
  DataGrid gdual(model.n_theta(), model.n_l());
  EigenSystem eig_hint;
  bool have_hint = false;

  long long l = 0;
  StopReason reason = StopReason::max_iters;
  while (l < cfg.max_iters) {
    DataGrid g_tilde = gdual;
    grid_axpy(g_tilde, nu, model.apply(rho_tilde));
    gdual = fit_conj_prox(kind, g_tilde, nu, g_obs);
    HermitianMatrix sigma = rho;
    herm_axpy(sigma, -tau, model.adjoint(gdual));
    rho_prev = std::move(rho);
    const EigenSystem* hint =
        (have_hint && (l & 127) != 0) ? &eig_hint : nullptr;
    rho = qkl_prox_hinted(sigma, tau * cfg.alpha, ctx, hint, &eig_hint);
    have_hint = true;
    const double beta = 1.0 / std::sqrt(1.0 + 2.0 * cfg.mu * tau);
    tau *= beta;
    nu /= beta;
    rho_tilde = herm_lincomb(1.0 + beta, rho, -beta, rho_prev);
    ++l;

    if (l % cfg.gap_check_stride == 0 || l == cfg.max_iters) {
      double primal = 0.0;
      const double gap =
          gap_core(floor_eigenvalues(rho, cfg.floor_eps), model, g_obs, ctx,
                   kind, cfg.alpha, &primal);
      rep.objective_history.push_back(primal);
      rep.final_gap = gap;
      if (gap <= cfg.gap_threshold) {
        reason = StopReason::gap;
        break;
      }
    }
  }

  rep.iterations = l;
  rep.stop_reason = reason;
  rep.solution = std::move(rho);
  rep.wall_time = seconds_since(t0);
  return rep;
}

} // namespace qtomo
