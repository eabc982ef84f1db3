#include "qtomo/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtomo {

std::vector<double> bessel_j_row(double x, int K) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::invalid_argument("bessel_j_row: x must be finite and >= 0");
  if (K < 0) throw std::invalid_argument("bessel_j_row: K must be >= 0");

  std::vector<double> row(2 * K + 1, 0.0);
  if (x < 1e-290) {
    row[K] = 1.0;
    return row;
  }

  const int k_start = K + static_cast<int>(std::ceil(1.5 * x)) + 20;
  std::vector<double> f(k_start + 2, 0.0);
  f[k_start + 1] = 0.0;
  f[k_start] = 1e-30;
  for (int n = k_start; n >= 1; --n) {
    f[n - 1] = (2.0 * n / x) * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > 1e250) {
      for (int j = n - 1; j <= k_start + 1; ++j) f[j] *= 1e-250;
    }
  }

  // J_0 + 2*sum_{m>=1} J_{2m} = 1 fixes the scale (and the sign).
  double s = 0.0;
  for (int n = k_start - (k_start % 2); n >= 2; n -= 2) s += f[n];
  s = 2.0 * s + f[0];
  const double scale = 1.0 / s;

  double sq = 0.0;
  for (int k = -K; k <= K; ++k) {
    double v = f[std::abs(k)] * scale;
    if (k < 0 && (k & 1)) v = -v;
    row[K + k] = v;
    sq += v * v;
  }
  if (std::abs(sq - 1.0) > 1e-10)
    throw std::runtime_error(
        "bessel_j_row: window [-K, K] misses mass (sum of squares " +
        std::to_string(sq) + "); increase K");
  return row;
}

double g_inverse(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("g_inverse: t not finite");
  // For very negative t the solution is e^t to machine precision.
  if (t <= -37.0) return std::exp(t);

  const double tol = 1e-13 * std::max(1.0, std::abs(t));
  const double accept = 1e-12 * std::max(1.0, std::abs(t));
  double s = (t <= 0.0) ? std::exp(t) : (t - std::log(std::max(t, 1.0)) + 0.5);

  bool newton_ok = false;
  for (int it = 0; it < 100; ++it) {
    const double f = std::log(s) + s - t;
    if (std::abs(f) <= tol) {
      newton_ok = true;
      break;
    }
    const double next = s - f * s / (1.0 + s);
    if (!(next > 0.0) || !std::isfinite(next) || next == s) break;
    s = next;
  }
  if (!newton_ok && std::abs(std::log(s) + s - t) > accept) {
    // Bisection fallback on the increasing map s -> ln(s) + s.
    double lo = std::min(s, 1.0);
    while (lo > 5e-324 && std::log(lo) + lo > t) lo *= 0.5;
    double hi = std::max(s, std::max(t, 1.0) + 1.0);
    while (std::isfinite(hi) && std::log(hi) + hi < t) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (std::log(mid) + mid < t)
        lo = mid;
      else
        hi = mid;
    }
    s = 0.5 * (lo + hi);
  }
  if (std::abs(std::log(s) + s - t) > accept)
    throw std::runtime_error("g_inverse: residual above tolerance at t = " +
                             std::to_string(t));
  return s;
}

std::vector<double> hermite_fn(int m, double x) {
  if (m < 0 || m > 200)
    throw std::invalid_argument(
        "hermite_fn: order must be in [0, 200] (recurrence not validated "
        "beyond)");
  if (!std::isfinite(x))
    throw std::invalid_argument("hermite_fn: x not finite");
  std::vector<double> u(m + 1);
  u[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (m >= 1) u[1] = std::sqrt(2.0) * x * u[0];
  for (int k = 1; k < m; ++k) {
    u[k + 1] = x * std::sqrt(2.0 / (k + 1)) * u[k] -
               std::sqrt(static_cast<double>(k) / (k + 1)) * u[k - 1];
  }
  return u;
}

Quadrature gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  Quadrature q;
  q.nodes.resize(order);
  q.weights.resize(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < order; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (order + 0.5));
    double pd = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pd = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pd;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[k] = mid - half * x;  // ascending in [a, b]
    q.weights[k] = 2.0 * half / ((1.0 - x * x) * pd * pd);
  }
  return q;
}

} // namespace qtomo
