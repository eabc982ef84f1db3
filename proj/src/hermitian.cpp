#include "qtomo/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qtomo/kernels.hpp"

namespace qtomo {

namespace {

const kernels::KernelTable& K() { return kernels::active(); }

double offdiag_norm(const std::vector<cplx>& a, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) acc += std::norm(a[i * n + j]);
  return std::sqrt(2.0 * acc);
}

} // namespace

HermitianMatrix HermitianMatrix::identity(int dim) {
  HermitianMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.a_[i * dim + i] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::from_trusted(int dim,
                                              std::vector<cplx> entries) {
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::invalid_argument("from_trusted: entry count != dim*dim");
  HermitianMatrix m;
  m.dim_ = dim;
  m.a_ = std::move(entries);
  return m;
}

void HermitianMatrix::set(int i, int j, cplx v) {
  if (i == j) {
    a_[i * dim_ + i] = cplx(v.real(), 0.0);
  } else {
    a_[i * dim_ + j] = v;
    a_[j * dim_ + i] = std::conj(v);
  }
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += a_[i * dim_ + i].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  const auto* d = reinterpret_cast<const double*>(a_.data());
  return std::sqrt(K().dot(d, d, a_.size() * 2));
}

HermitianMatrix make_hermitian(int dim, const std::vector<cplx>& entries) {
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::invalid_argument("make_hermitian: entry count != dim*dim");
  double norm2 = 0.0, asym2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      norm2 += std::norm(entries[i * dim + j]);
      asym2 += std::norm(entries[i * dim + j] -
                         std::conj(entries[j * dim + i]));
    }
  }
  const double bound = 1e-12 * std::max(1.0, std::sqrt(norm2));
  if (std::sqrt(asym2) > bound)
    throw std::invalid_argument(
        "make_hermitian: asymmetry " + std::to_string(std::sqrt(asym2)) +
        " exceeds tolerance " + std::to_string(bound));
  HermitianMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    m.data()[i * dim + i] = cplx(entries[i * dim + i].real(), 0.0);
    for (int j = i + 1; j < dim; ++j) {
      const cplx v =
          0.5 * (entries[i * dim + j] + std::conj(entries[j * dim + i]));
      m.data()[i * dim + j] = v;
      m.data()[j * dim + i] = std::conj(v);
    }
  }
  return m;
}

namespace {

// Diagonalizes the Hermitian matrix in `a` (row-major, n x n) in place by
// cyclic Jacobi rotations while accumulating the rotations into the rows of
// `m` (so m ends up holding V* for a = V diag V*).  After every rotation the
// rotated columns are restored from the rotated rows by conjugation, which
// keeps the matrix exactly Hermitian and avoids strided arithmetic.
void jacobi_core(std::vector<cplx>& a, std::vector<cplx>& m, int n,
                 double norm_f) {
  const double tol = 1e-14 * norm_f;
  const double thresh = tol / n;

  bool converged = (norm_f == 0.0);
  double off = 0.0;
  for (int sweep = 0; sweep <= 100 && !converged; ++sweep) {
    off = offdiag_norm(a, n);
    if (off <= tol) {
      converged = true;
      break;
    }
    if (sweep == 100) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double abs_pq = std::abs(apq);
        if (abs_pq <= thresh) continue;
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const cplx phase = apq / abs_pq;
        const double tau = (aqq - app) / (2.0 * abs_pq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = (t * c) * phase;

        K().rot(&a[p * n], &a[q * n], c, s, n);
        a[p * n + p] = app - t * abs_pq;
        a[q * n + q] = aqq + t * abs_pq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          a[i * n + p] = std::conj(a[p * n + i]);
          a[i * n + q] = std::conj(a[q * n + i]);
        }

        K().rot(&m[p * n], &m[q * n], c, s, n);
      }
    }
  }
  if (!converged)
    throw std::runtime_error(
        "eig_hermitian: no convergence in 100 sweeps, off-diagonal norm " +
        std::to_string(off));
}

std::vector<int> ascending_diag_order(const std::vector<cplx>& a, int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a[i * n + i].real() < a[j * n + j].real();
  });
  return order;
}

} // namespace

EigenSystem eig_hermitian(const HermitianMatrix& mat) {
  const int n = mat.dim();
  EigenSystem es;
  es.dim = n;
  es.values.assign(n, 0.0);
  es.vectors.assign(static_cast<std::size_t>(n) * n, cplx{});
  if (n == 0) return es;

  std::vector<cplx> a(mat.data(), mat.data() + static_cast<std::size_t>(n) * n);
  // rows of m hold the conjugated eigenvectors (m accumulates V*)
  std::vector<cplx> m(static_cast<std::size_t>(n) * n, cplx{});
  for (int i = 0; i < n; ++i) m[i * n + i] = 1.0;

  jacobi_core(a, m, n, mat.frobenius_norm());

  const std::vector<int> order = ascending_diag_order(a, n);
  for (int j = 0; j < n; ++j) {
    const int r = order[j];
    es.values[j] = a[r * n + r].real();
    for (int i = 0; i < n; ++i)
      es.vectors[i * n + j] = std::conj(m[r * n + i]);
  }
  return es;
}

EigenSystem eig_hermitian_hinted(const HermitianMatrix& mat,
                                 const EigenSystem* hint) {
  const int n = mat.dim();
  if (hint == nullptr || hint->dim != n ||
      static_cast<int>(hint->vectors.size()) != n * n)
    return eig_hermitian(mat);

  // b = V* mat V in the hint basis; near-diagonal when the hint is good.
  const std::vector<cplx>& v = hint->vectors;
  std::vector<cplx> w(static_cast<std::size_t>(n) * n, cplx{});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      K().zaxpy(&w[i * n], mat.at(i, k), &v[k * n], n);
  std::vector<cplx> b(static_cast<std::size_t>(n) * n, cplx{});
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      K().zaxpy(&b[l * n], std::conj(v[i * n + l]), &w[i * n], n);
  for (int i = 0; i < n; ++i) {
    b[i * n + i] = cplx(b[i * n + i].real(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const cplx h = 0.5 * (b[i * n + j] + std::conj(b[j * n + i]));
      b[i * n + j] = h;
      b[j * n + i] = std::conj(h);
    }
  }

  double norm2 = 0.0;
  for (const cplx& e : b) norm2 += std::norm(e);
  std::vector<cplx> m(static_cast<std::size_t>(n) * n, cplx{});
  for (int i = 0; i < n; ++i) m[i * n + i] = 1.0;
  jacobi_core(b, m, n, std::sqrt(norm2));

  EigenSystem es;
  es.dim = n;
  es.values.assign(n, 0.0);
  es.vectors.assign(static_cast<std::size_t>(n) * n, cplx{});
  const std::vector<int> order = ascending_diag_order(b, n);
  for (int j = 0; j < n; ++j) {
    const int r = order[j];
    es.values[j] = b[r * n + r].real();
    // column j of V Vb, using that row r of m holds conj of Vb's column
    for (int i = 0; i < n; ++i)
      es.vectors[i * n + j] = K().dotc(&v[i * n], &m[r * n], n);
  }
  return es;
}

HermitianMatrix eigen_reconstruct(const EigenSystem& es,
                                  const std::vector<double>& values) {
  const int n = es.dim;
  if (static_cast<int>(values.size()) != n)
    throw std::invalid_argument("eigen_reconstruct: value count != dim");
  std::vector<cplx> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      w[i * n + k] = es.vectors[i * n + k] * values[k];
  HermitianMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx v = K().dotc(&w[i * n], &es.vectors[j * n], n);
      if (i == j) {
        out.data()[i * n + i] = cplx(v.real(), 0.0);
      } else {
        out.data()[i * n + j] = v;
        out.data()[j * n + i] = std::conj(v);
      }
    }
  }
  return out;
}

HermitianMatrix apply_spectral(const HermitianMatrix& a,
                               const std::function<double(double)>& f) {
  EigenSystem es = eig_hermitian(a);
  std::vector<double> mapped(es.values.size());
  for (std::size_t i = 0; i < es.values.size(); ++i) {
    mapped[i] = f(es.values[i]);
    if (!std::isfinite(mapped[i]))
      throw std::domain_error(
          "apply_spectral: function not finite at eigenvalue " +
          std::to_string(es.values[i]));
  }
  return eigen_reconstruct(es, mapped);
}

double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("trace_inner: dimension mismatch");
  const cplx v = K().dotc(a.data(), b.data(),
                          static_cast<std::size_t>(a.dim()) * a.dim());
  const double scale = a.frobenius_norm() * b.frobenius_norm();
  if (std::abs(v.imag()) > 1e-12 * scale)
    throw std::runtime_error(
        "trace_inner: imaginary residue exceeds tolerance; inputs are not "
        "Hermitian");
  return v.real();
}

double trace_norm(const HermitianMatrix& a) {
  EigenSystem es = eig_hermitian(a);
  double s = 0.0;
  for (double v : es.values) s += std::abs(v);
  return s;
}

HermitianMatrix floor_eigenvalues(const HermitianMatrix& a, double eps) {
  if (eps < 0.0 || !std::isfinite(eps))
    throw std::invalid_argument("floor_eigenvalues: eps must be >= 0");
  HermitianMatrix out = a;
  for (int i = 0; i < a.dim(); ++i)
    out.data()[i * a.dim() + i] += eps;
  return out;
}

void herm_axpy(HermitianMatrix& y, double s, const HermitianMatrix& x) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("herm_axpy: dimension mismatch");
  K().axpy(reinterpret_cast<double*>(y.data()), s,
           reinterpret_cast<const double*>(x.data()),
           static_cast<std::size_t>(x.dim()) * x.dim() * 2);
}

HermitianMatrix herm_lincomb(double a, const HermitianMatrix& x, double b,
                             const HermitianMatrix& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("herm_lincomb: dimension mismatch");
  HermitianMatrix out = y;
  K().axpby(reinterpret_cast<double*>(out.data()), a,
            reinterpret_cast<const double*>(x.data()), b,
            static_cast<std::size_t>(x.dim()) * x.dim() * 2);
  return out;
}

} // namespace qtomo
