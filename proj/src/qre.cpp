#include "qtomo/qre.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "qtomo/special_functions.hpp"

namespace qtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const HermitianMatrix& m, const QreContext& ctx,
                const char* where) {
  if (m.dim() != ctx.prior.dim())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

} // namespace

QreContext make_qre_context(const HermitianMatrix& prior, double floor_eps) {
  if (floor_eps < 0.0)
    throw std::invalid_argument("make_qre_context: floor_eps must be >= 0");
  EigenSystem es = eig_hermitian(prior);
  for (double v : es.values) {
    if (v < 1e-14)
      throw std::invalid_argument(
          "make_qre_context: prior eigenvalue " + std::to_string(v) +
          " below 1e-14; a full-rank prior is required");
  }
  std::vector<double> logs(es.values.size());
  for (std::size_t i = 0; i < es.values.size(); ++i)
    logs[i] = std::log(es.values[i]);
  QreContext ctx;
  ctx.prior = prior;
  ctx.log_prior = eigen_reconstruct(es, logs);
  ctx.floor_eps = floor_eps;

  const HermitianMatrix back = apply_spectral(ctx.log_prior, [](double t) {
    return std::exp(t);
  });
  const HermitianMatrix diff = herm_lincomb(1.0, back, -1.0, prior);
  if (diff.frobenius_norm() > 1e-9)
    throw std::runtime_error(
        "make_qre_context: exp(log_prior) does not reproduce the prior");
  return ctx;
}

double qkl_value(const HermitianMatrix& rho, const QreContext& ctx) {
  check_dims(rho, ctx, "qkl_value");
  EigenSystem es = eig_hermitian(rho);
  const double tol_neg = 1e-12 * rho.frobenius_norm();
  double entropy = 0.0;
  for (double v : es.values) {
    if (v < -tol_neg) return kInf;
    if (v > 0.0) entropy += v * std::log(v);
  }
  return ctx.prior.trace() - rho.trace() + entropy -
         trace_inner(rho, ctx.log_prior);
}

HermitianMatrix qkl_subgrad(const HermitianMatrix& rho,
                            const QreContext& ctx) {
  check_dims(rho, ctx, "qkl_subgrad");
  EigenSystem es = eig_hermitian(rho);
  const double scale = std::max(1.0, std::abs(es.values.back()));
  if (es.values.front() <= 1e-15 * scale)
    throw std::domain_error(
        "qkl_subgrad: matrix is singular within tolerance; the "
        "subdifferential is empty there");
  std::vector<double> logs(es.values.size());
  for (std::size_t i = 0; i < es.values.size(); ++i)
    logs[i] = std::log(es.values[i]);
  return herm_lincomb(1.0, eigen_reconstruct(es, logs), -1.0, ctx.log_prior);
}

double qkl_conjugate(const HermitianMatrix& sigma, const QreContext& ctx) {
  check_dims(sigma, ctx, "qkl_conjugate");
  const HermitianMatrix m = herm_lincomb(1.0, sigma, 1.0, ctx.log_prior);
  EigenSystem es = eig_hermitian(m);
  if (es.values.back() > 700.0)
    throw std::domain_error(
        "qkl_conjugate: eigenvalue " + std::to_string(es.values.back()) +
        " of sigma + ln(prior) exceeds the supported exp range (700)");
  double s = 0.0;
  for (double v : es.values) s += std::exp(v);
  return s - ctx.prior.trace();
}

HermitianMatrix qkl_conj_grad(const HermitianMatrix& sigma,
                              const QreContext& ctx) {
  check_dims(sigma, ctx, "qkl_conj_grad");
  const HermitianMatrix m = herm_lincomb(1.0, sigma, 1.0, ctx.log_prior);
  EigenSystem es = eig_hermitian(m);
  if (es.values.back() > 700.0)
    throw std::domain_error(
        "qkl_conj_grad: eigenvalue " + std::to_string(es.values.back()) +
        " of sigma + ln(prior) exceeds the supported exp range (700)");
  std::vector<double> exps(es.values.size());
  for (std::size_t i = 0; i < es.values.size(); ++i)
    exps[i] = std::exp(es.values[i]);
  return eigen_reconstruct(es, exps);
}

HermitianMatrix qkl_prox(const HermitianMatrix& sigma, double tau,
                         const QreContext& ctx) {
  return qkl_prox_hinted(sigma, tau, ctx, nullptr, nullptr);
}

HermitianMatrix qkl_prox_hinted(const HermitianMatrix& sigma, double tau,
                                const QreContext& ctx,
                                const EigenSystem* hint,
                                EigenSystem* eig_out) {
  check_dims(sigma, ctx, "qkl_prox");
  if (!(tau > 0.0))
    throw std::invalid_argument("qkl_prox: tau must be > 0");
  const double log_tau = std::log(tau);
  HermitianMatrix m = herm_lincomb(1.0 / tau, sigma, 1.0, ctx.log_prior);
  for (int i = 0; i < m.dim(); ++i)
    m.data()[i * m.dim() + i] -= log_tau;
  EigenSystem es = eig_hermitian_hinted(m, hint);
  std::vector<double> w(es.values.size());
  for (std::size_t i = 0; i < es.values.size(); ++i)
    w[i] = tau * g_inverse(es.values[i]);
  HermitianMatrix out = eigen_reconstruct(es, w);
  if (eig_out != nullptr) *eig_out = std::move(es);
  return out;
}

HermitianMatrix qkl_conj_prox(const HermitianMatrix& sigma, double tau,
                              const QreContext& ctx) {
  check_dims(sigma, ctx, "qkl_conj_prox");
  if (!(tau > 0.0))
    throw std::invalid_argument("qkl_conj_prox: tau must be > 0");
  const double log_tau = std::log(tau);
  HermitianMatrix m = herm_lincomb(1.0, sigma, 1.0, ctx.log_prior);
  for (int i = 0; i < m.dim(); ++i)
    m.data()[i * m.dim() + i] += log_tau;
  EigenSystem es = eig_hermitian(m);
  std::vector<double> w(es.values.size());
  for (std::size_t i = 0; i < es.values.size(); ++i)
    w[i] = g_inverse(es.values[i]);
  return herm_lincomb(1.0, sigma, -1.0, eigen_reconstruct(es, w));
}

bool convexity_region_check(const HermitianMatrix& rho, double mu) {
  if (!(mu > 0.0))
    throw std::invalid_argument("convexity_region_check: mu must be > 0");
  EigenSystem es = eig_hermitian(rho);
  return es.values.empty() || es.values.back() <= 1.0 / mu + 1e-12;
}

} // namespace qtomo
