#pragma once

#include <vector>

namespace qtomo {

// Bessel functions J_k(x) for k in [-K, K], returned with index offset K
// (element K+k holds J_k).  Computed by backward (Miller) recurrence with
// normalization through the even-order sum identity; accurate to about
// 1e-13 absolute.  Requires x >= 0.  Throws when the window is too small to
// hold the mass, i.e. when sum_k J_k^2 over the window leaves more than
// 1e-10.
std::vector<double> bessel_j_row(double x, int K);

// Solves ln(s) + s = t for s > 0.  Newton iteration from a branch-dependent
// starting point with a bisection fallback; residual stays below
// 1e-12*max(1, |t|).
double g_inverse(double t);

// Hermite functions u_0..u_m at x: u_m(x) = (sqrt(pi) m! 2^m)^(-1/2)
// H_m(x) exp(-x^2/2), evaluated with the normalized three-term recurrence.
// m is capped at 200.
std::vector<double> hermite_fn(int m, double x);

// Gauss-Legendre nodes and weights on [a, b].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(int order, double a, double b);

} // namespace qtomo
