#include "qtomo/states.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qtomo/random.hpp"
#include "qtomo/special_functions.hpp"

namespace qtomo {

HermitianMatrix make_cat_state(double amplitude, int dim) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("make_cat_state: amplitude must be >= 0");
  if (dim < 1) throw std::invalid_argument("make_cat_state: dim must be >= 1");

  // Coherent-state coefficients c_n = e^{-a^2/2} a^n / sqrt(n!), built by
  // the stable ratio recurrence; the even cat keeps 2*c_n on even n.
  std::vector<double> psi(dim, 0.0);
  double c = std::exp(-0.5 * amplitude * amplitude);
  double norm_sq = 0.0;
  for (int n = 0; n < dim; ++n) {
    if (n > 0) c *= amplitude / std::sqrt(static_cast<double>(n));
    psi[n] = (n % 2 == 0) ? 2.0 * c : 0.0;
    norm_sq += psi[n] * psi[n];
  }

  const double full_norm =
      std::sqrt(2.0 * (1.0 + std::exp(-2.0 * amplitude * amplitude)));
  const double kept_norm = std::sqrt(norm_sq);
  if (kept_norm < 0.999 * full_norm)
    throw std::invalid_argument(
        "make_cat_state: truncation at dim=" + std::to_string(dim) +
        " keeps less than 99.9% of the state norm; increase dim");

  std::vector<cplx> entries(static_cast<std::size_t>(dim) * dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n)
      entries[m * dim + n] = psi[m] * psi[n] / norm_sq;
  return HermitianMatrix::from_trusted(dim, std::move(entries));
}

HermitianMatrix make_pinem_state(double g_pump, int dim, double jitter_sigma,
                                 int jitter_samples, std::uint64_t seed) {
  if (!(g_pump >= 0.0) || !std::isfinite(g_pump))
    throw std::invalid_argument("make_pinem_state: g_pump must be >= 0");
  if (dim < 1 || dim % 2 == 0)
    throw std::invalid_argument("make_pinem_state: dim must be odd and >= 1");
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma))
    throw std::invalid_argument(
        "make_pinem_state: jitter_sigma must be >= 0 and finite");
  if (jitter_samples < 1)
    throw std::invalid_argument("make_pinem_state: jitter_samples must be >= 1");

  const int half = (dim - 1) / 2;
  const double x = 2.0 * g_pump;
  // Evaluate on a window wide enough for full accuracy, then truncate to
  // the requested ladder and account for the discarded mass.
  const int wide = std::max(half, static_cast<int>(std::ceil(x)) + 30);
  const std::vector<double> row = bessel_j_row(x, wide);
  std::vector<double> b(dim);
  double mass = 0.0;
  for (int m = 0; m < dim; ++m) {
    b[m] = row[wide + (m - half)];
    mass += b[m] * b[m];
  }
  if (1.0 - mass > 1e-6)
    throw std::runtime_error(
        "make_pinem_state: ladder of dim=" + std::to_string(dim) +
        " loses more than 1e-6 of the probability mass; increase dim");

  // rho_{mn} = b_m b_n * mean_j e^{i(m-n)phi_j}; the phase average depends
  // only on the offset m-n.
  CounterRng rng(seed);
  std::vector<cplx> avg(dim, cplx{});
  for (int j = 0; j < jitter_samples; ++j) {
    const double phi = jitter_sigma * rng.next_normal();
    for (int d = 0; d < dim; ++d)
      avg[d] += std::exp(cplx(0.0, d * phi));
  }
  for (int d = 0; d < dim; ++d) avg[d] /= static_cast<double>(jitter_samples);

  std::vector<cplx> entries(static_cast<std::size_t>(dim) * dim);
  for (int m = 0; m < dim; ++m) {
    entries[m * dim + m] = b[m] * b[m] / mass;
    for (int n = m + 1; n < dim; ++n) {
      const cplx v = b[m] * b[n] * std::conj(avg[n - m]) / mass;
      entries[m * dim + n] = v;
      entries[n * dim + m] = std::conj(v);
    }
  }
  return HermitianMatrix::from_trusted(dim, std::move(entries));
}

} // namespace qtomo
