// Independent reference implementations used to cross-check the library:
// slow but simple algorithms (power series, bisection, golden section,
// real-symmetric Jacobi on the doubled embedding) that share no code with
// the production paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qtomo/data_grid.hpp"
#include "qtomo/hermitian.hpp"
#include "qtomo/random.hpp"

namespace oracles {

using qtomo::cplx;
using qtomo::CounterRng;
using qtomo::DataGrid;
using qtomo::HermitianMatrix;

// Bessel J_k(x) by the alternating power series in long double arithmetic;
// adequate for |x| <= 12 and |k| <= 60.
inline double bessel_series(int k, double x) {
  const bool flip = k < 0 && (k % 2 != 0);
  k = std::abs(k);
  const long double h = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= k; ++i) term *= h / i;
  long double sum = term;
  for (int j = 1; j <= 400; ++j) {
    term *= -(h * h) / (static_cast<long double>(j) * (k + j));
    sum += term;
    if (std::abs(term) < 1e-30L * (std::abs(sum) + 1e-30L)) break;
  }
  return static_cast<double>(flip ? -sum : sum);
}

// Cyclic Jacobi for a real symmetric matrix (row-major); returns the
// eigenvalues in ascending order.
inline std::vector<double> sym_eigvals(std::vector<double> a, int n) {
  double frob = 0.0;
  for (double v : a) frob += v * v;
  frob = std::sqrt(frob);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * a[p * n + q] * a[p * n + q];
    if (std::sqrt(off) <= 1e-13 * (1.0 + frob)) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double rp = a[p * n + i], rq = a[q * n + i];
          a[p * n + i] = c * rp - s * rq;
          a[q * n + i] = s * rp + c * rq;
        }
        for (int i = 0; i < n; ++i) {
          const double cp = a[i * n + p], cq = a[i * n + q];
          a[i * n + p] = c * cp - s * cq;
          a[i * n + q] = s * cp + c * cq;
        }
      }
  }
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = a[i * n + i];
  std::sort(vals.begin(), vals.end());
  return vals;
}

// Hermitian eigenvalues through the real 2n x 2n embedding
// [[X, -Y], [Y, X]] of A = X + iY, whose spectrum doubles that of A.
inline std::vector<double> herm_eigvals(const HermitianMatrix& a) {
  const int n = a.dim();
  std::vector<double> m(4 * n * n, 0.0);
  const int nn = 2 * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = a.at(i, j).real();
      const double y = a.at(i, j).imag();
      m[i * nn + j] = x;
      m[(i + n) * nn + (j + n)] = x;
      m[i * nn + (j + n)] = -y;
      m[(i + n) * nn + j] = y;
    }
  const std::vector<double> all = sym_eigvals(std::move(m), nn);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
  return vals;
}

// Solves ln(s) + s = t by plain bisection in long double.
inline double g_inverse_bisect(double t) {
  long double lo = t < 1.0 ? std::exp(static_cast<long double>(t) - 1.0L) : 0.5L;
  long double hi = t < 1.0 ? 1.0L : static_cast<long double>(t) + 1.0L;
  auto f = [&](long double s) { return std::log(s) + s - t; };
  if (f(lo) > 0.0L || f(hi) < 0.0L)
    throw std::runtime_error("g_inverse_bisect: bad bracket");
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (f(mid) <= 0.0L ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// Golden-section minimizer of a unimodal function on [a, b].
template <typename F>
double golden_min(F f, double a, double b, int iters = 200) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Scalar prox value: argmin_p (p - s)^2/(2 tau) + (w0 - p + p ln(p/w0)),
// solved by bisection on the optimality equation (p - s)/tau + ln(p/w0) = 0.
inline double scalar_prox_bisect(double s, double tau, double w0) {
  auto f = [&](long double p) {
    return (p - s) / tau + std::log(p) - std::log((long double)w0);
  };
  long double lo = 1e-300L, hi = std::max({2.0, 2.0 * s, 2.0 * w0});
  while (f(hi) < 0.0L) hi *= 2.0;
  for (int i = 0; i < 300; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (f(mid) <= 0.0L ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

inline HermitianMatrix random_hermitian(CounterRng& rng, int dim,
                                        double scale = 1.0) {
  HermitianMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    m.set(i, i, cplx(scale * rng.next_normal(), 0.0));
    for (int j = i + 1; j < dim; ++j) {
      const double re = scale * rng.next_normal();
      const double im = scale * rng.next_normal();
      m.set(i, j, cplx(re, im));
    }
  }
  return m;
}

// Random positive definite matrix with eigenvalues exp(scale * normal).
inline HermitianMatrix random_pd(CounterRng& rng, int dim,
                                 double scale = 0.6) {
  const HermitianMatrix h = random_hermitian(rng, dim, scale);
  return qtomo::apply_spectral(h, [](double t) { return std::exp(t); });
}

// Random density matrix (PD, trace 1).
inline HermitianMatrix random_density(CounterRng& rng, int dim) {
  HermitianMatrix m = random_pd(rng, dim, 0.8);
  return qtomo::herm_lincomb(1.0 / m.trace(), m, 0.0, m);
}

inline double grid_inner(const DataGrid& a, const DataGrid& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) acc += a.v[i] * b.v[i];
  return acc;
}

} // namespace oracles
