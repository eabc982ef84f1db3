#include "qtomo/kernels.hpp"

#include <cmath>
#include <limits>

namespace qtomo::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double* y, double a, const double* x, double b,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void cmuladd_rw_scalar(cplx* dst, const double* w, const cplx* src,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += w[i] * src[i];
}

void zaxpy_scalar(cplx* y, cplx a, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
  }
  return {re, im};
}

void rot_scalar(cplx* x, cplx* y, double c, cplx s, std::size_t n) {
  const cplx sc = std::conj(s);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    x[i] = c * xi - s * y[i];
    y[i] = sc * xi + c * y[i];
  }
}

double kl_dual_prox_scalar(double* out, const double* gt, const double* gobs,
                           double nu, std::size_t n) {
  if (n == 0) return 0.0;
  double min_rad = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 - gt[i]);
    const double rad = u * u + nu * gobs[i];
    if (rad < min_rad) min_rad = rad;
    out[i] = 0.5 * (1.0 + gt[i]) - std::sqrt(rad > 0.0 ? rad : 0.0);
  }
  return min_rad;
}

} // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      "scalar",     dot_scalar,  axpy_scalar,  axpby_scalar, cmuladd_rw_scalar,
      dotc_scalar,  zaxpy_scalar, rot_scalar,  kl_dual_prox_scalar,
  };
  return table;
}

} // namespace qtomo::kernels
