// AVX2+FMA kernel variants.  This translation unit is compiled with
// -mavx2 -mfma and must only be entered through the dispatch table after a
// runtime CPU check.

#include "qtomo/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <cmath>
#include <immintrin.h>
#include <limits>

namespace qtomo::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  __m128d t = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, t));
}

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_min_pd(lo, hi);
  __m128d t = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_min_sd(s, t));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d a4 = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yi = _mm256_loadu_pd(y + i);
    yi = _mm256_fmadd_pd(a4, _mm256_loadu_pd(x + i), yi);
    _mm256_storeu_pd(y + i, yi);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double* y, double a, const double* x, double b,
                std::size_t n) {
  const __m256d a4 = _mm256_set1_pd(a);
  const __m256d b4 = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(b4, _mm256_loadu_pd(y + i));
    t = _mm256_fmadd_pd(a4, _mm256_loadu_pd(x + i), t);
    _mm256_storeu_pd(y + i, t);
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void cmuladd_rw_avx2(cplx* dst, const double* w, const cplx* src,
                     std::size_t n) {
  auto* d = reinterpret_cast<double*>(dst);
  const auto* s = reinterpret_cast<const double*>(src);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w4 = _mm256_loadu_pd(w + i);
    const __m256d wlo = _mm256_permute4x64_pd(w4, 0x50);  // w0 w0 w1 w1
    const __m256d whi = _mm256_permute4x64_pd(w4, 0xFA);  // w2 w2 w3 w3
    __m256d d0 = _mm256_loadu_pd(d + 2 * i);
    __m256d d1 = _mm256_loadu_pd(d + 2 * i + 4);
    d0 = _mm256_fmadd_pd(wlo, _mm256_loadu_pd(s + 2 * i), d0);
    d1 = _mm256_fmadd_pd(whi, _mm256_loadu_pd(s + 2 * i + 4), d1);
    _mm256_storeu_pd(d + 2 * i, d0);
    _mm256_storeu_pd(d + 2 * i + 4, d1);
  }
  for (; i < n; ++i) dst[i] += w[i] * src[i];
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  // sign mask flipping the odd (imaginary) lanes
  const __m256d neg_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d re_acc = _mm256_setzero_pd();
  __m256d im_acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d x4 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y4 = _mm256_loadu_pd(yd + 2 * i);
    re_acc = _mm256_fmadd_pd(x4, y4, re_acc);
    const __m256d xs = _mm256_permute_pd(x4, 0x5);  // xi xr pairs
    im_acc =
        _mm256_add_pd(im_acc, _mm256_xor_pd(_mm256_mul_pd(xs, y4), neg_odd));
  }
  double re = hsum(re_acc);
  double im = hsum(im_acc);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
  }
  return {re, im};
}

void zaxpy_avx2(cplx* y, cplx a, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  const __m256d ar4 = _mm256_set1_pd(a.real());
  const __m256d ai4 = _mm256_set1_pd(a.imag());
  const __m256d neg_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d x4 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(x4, 0x5);
    // a*x = (ar*xr - ai*xi, ar*xi + ai*xr)
    const __m256d ax = _mm256_fmadd_pd(
        ar4, x4, _mm256_xor_pd(_mm256_mul_pd(ai4, xs), neg_even));
    _mm256_storeu_pd(yd + 2 * i,
                     _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), ax));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void rot_avx2(cplx* x, cplx* y, double c, cplx s, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d c4 = _mm256_set1_pd(c);
  const __m256d sr4 = _mm256_set1_pd(s.real());
  const __m256d si4 = _mm256_set1_pd(s.imag());
  const __m256d neg_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  const __m256d neg_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d x4 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d y4 = _mm256_loadu_pd(yd + 2 * i);
    const __m256d xs = _mm256_permute_pd(x4, 0x5);
    const __m256d ys = _mm256_permute_pd(y4, 0x5);
    // s*y = (sr*yr - si*yi, sr*yi + si*yr)
    const __m256d sy = _mm256_fmadd_pd(
        sr4, y4, _mm256_xor_pd(_mm256_mul_pd(si4, ys), neg_even));
    // conj(s)*x = (sr*xr + si*xi, sr*xi - si*xr)
    const __m256d csx = _mm256_fmadd_pd(
        sr4, x4, _mm256_xor_pd(_mm256_mul_pd(si4, xs), neg_odd));
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmsub_pd(c4, x4, sy));
    _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(c4, y4, csx));
  }
  const cplx sc = std::conj(s);
  for (; i < n; ++i) {
    const cplx xi = x[i];
    x[i] = c * xi - s * y[i];
    y[i] = sc * xi + c * y[i];
  }
}

double kl_dual_prox_avx2(double* out, const double* gt, const double* gobs,
                         double nu, std::size_t n) {
  if (n == 0) return 0.0;
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d nu4 = _mm256_set1_pd(nu);
  const __m256d zero = _mm256_setzero_pd();
  const double inf = std::numeric_limits<double>::infinity();
  __m256d min4 = _mm256_set1_pd(inf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g4 = _mm256_loadu_pd(gt + i);
    const __m256d u = _mm256_mul_pd(half, _mm256_sub_pd(one, g4));
    const __m256d rad =
        _mm256_fmadd_pd(nu4, _mm256_loadu_pd(gobs + i), _mm256_mul_pd(u, u));
    min4 = _mm256_min_pd(min4, rad);
    const __m256d root = _mm256_sqrt_pd(_mm256_max_pd(rad, zero));
    _mm256_storeu_pd(
        out + i,
        _mm256_sub_pd(_mm256_mul_pd(half, _mm256_add_pd(one, g4)), root));
  }
  double min_rad = hmin(min4);
  for (; i < n; ++i) {
    const double u = 0.5 * (1.0 - gt[i]);
    const double rad = u * u + nu * gobs[i];
    if (rad < min_rad) min_rad = rad;
    out[i] = 0.5 * (1.0 + gt[i]) - std::sqrt(rad > 0.0 ? rad : 0.0);
  }
  return min_rad;
}

} // namespace

const KernelTable* avx2_table() {
  static const KernelTable table = {
      "avx2",     dot_avx2,   axpy_avx2, axpby_avx2, cmuladd_rw_avx2,
      dotc_avx2,  zaxpy_avx2, rot_avx2,  kl_dual_prox_avx2,
  };
  return &table;
}

} // namespace qtomo::kernels

#else

namespace qtomo::kernels {
const KernelTable* avx2_table() { return nullptr; }
} // namespace qtomo::kernels

#endif
