#pragma once

#include <complex>
#include <cstddef>

namespace qtomo::kernels {

using cplx = std::complex<double>;

// Array kernels backing the hot paths (plane rotations in the eigensolver,
// forward-model diagonal sums and phase synthesis, grid updates).  Every
// entry has a scalar reference implementation; wider variants are compiled
// in their own translation units and selected once at runtime.  Set
// QTOMO_KERNELS=scalar|avx2 to force a table.
struct KernelTable {
  const char* name;

  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);

  // y[i] += a*x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);

  // y[i] = a*x[i] + b*y[i]
  void (*axpby)(double* y, double a, const double* x, double b,
                std::size_t n);

  // dst[i] += w[i]*src[i] with real weights w and complex dst/src
  void (*cmuladd_rw)(cplx* dst, const double* w, const cplx* src,
                     std::size_t n);

  // sum_i x[i]*conj(y[i])
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);

  // y[i] += a*x[i] with complex a, x, y
  void (*zaxpy)(cplx* y, cplx a, const cplx* x, std::size_t n);

  // Plane rotation with real cosine c and complex sine s:
  //   x[i] <- c*x[i] - s*y[i]
  //   y[i] <- conj(s)*x_old[i] + c*y[i]
  void (*rot)(cplx* x, cplx* y, double c, cplx s, std::size_t n);

  // out[i] = (1+gt[i])/2 - sqrt(max(rad_i, 0)) with
  // rad_i = ((1-gt[i])/2)^2 + nu*gobs[i].  Returns min_i rad_i (0 when
  // n == 0) so callers can reject corrupt inputs.  out may alias gt.
  double (*kl_dual_prox)(double* out, const double* gt, const double* gobs,
                         double nu, std::size_t n);
};

const KernelTable& active();        // runtime-selected table
const KernelTable& scalar_table();  // reference implementations
const KernelTable* avx2_table();    // nullptr when unavailable

} // namespace qtomo::kernels
