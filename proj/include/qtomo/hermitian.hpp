#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qtomo {

using cplx = std::complex<double>;

// Dense self-adjoint complex matrix, row-major.  The checked factory
// `make_hermitian` verifies self-adjointness to within 1e-12 (relative to
// the Frobenius norm) and then symmetrizes exactly, so stored entries always
// satisfy a(i,j) == conj(a(j,i)) and real diagonals.  Internal producers
// that preserve the invariant by construction use `from_trusted`.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int dim) : dim_(dim), a_(dim * dim, cplx{}) {}

  static HermitianMatrix identity(int dim);
  static HermitianMatrix from_trusted(int dim, std::vector<cplx> entries);

  int dim() const { return dim_; }
  cplx at(int i, int j) const { return a_[i * dim_ + j]; }
  void set(int i, int j, cplx v);  // sets (i,j) and mirrors (j,i)

  const cplx* data() const { return a_.data(); }
  cplx* data() { return a_.data(); }

  double trace() const;
  double frobenius_norm() const;

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

// Checked construction from arbitrary row-major entries; throws
// std::invalid_argument when the asymmetry exceeds 1e-12*max(1, ||a||_F).
HermitianMatrix make_hermitian(int dim, const std::vector<cplx>& entries);

struct EigenSystem {
  int dim = 0;
  std::vector<double> values;   // ascending
  std::vector<cplx> vectors;    // row-major; column j is the j-th eigenvector
};

// Full eigendecomposition by cyclic Jacobi rotations.  Converges when the
// off-diagonal Frobenius norm falls below 1e-14*||a||_F; throws
// std::runtime_error if that does not happen within 100 sweeps.
EigenSystem eig_hermitian(const HermitianMatrix& a);

// Same decomposition, optionally seeded with a basis that nearly
// diagonalizes `a` (e.g. the previous iterate's eigenvectors); `a` is first
// rotated into that basis so Jacobi starts from a near-diagonal matrix.  A
// null or wrong-sized hint falls back to the plain path.
EigenSystem eig_hermitian_hinted(const HermitianMatrix& a,
                                 const EigenSystem* hint);

// V diag(values) V* for an existing eigenbasis.
HermitianMatrix eigen_reconstruct(const EigenSystem& es,
                                  const std::vector<double>& values);

// f applied to the spectrum: V diag(f(lambda)) V*.  Throws
// std::domain_error when f produces a non-finite value, reporting the
// offending eigenvalue.
HermitianMatrix apply_spectral(const HermitianMatrix& a,
                               const std::function<double(double)>& f);

// Real part of tr(a b); the imaginary residue must stay below
// 1e-12*||a||_F*||b||_F (asserted) and is discarded.
double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b);

// Sum of absolute eigenvalues.
double trace_norm(const HermitianMatrix& a);

// a + eps*I (exact spectral floor for Hermitian a); eps must be >= 0.
HermitianMatrix floor_eigenvalues(const HermitianMatrix& a, double eps);

// In-place y += s*x and y = x + s*(x - x_prev) style helpers used by the
// iterative solvers; dimensions must match.
void herm_axpy(HermitianMatrix& y, double s, const HermitianMatrix& x);
HermitianMatrix herm_lincomb(double a, const HermitianMatrix& x, double b,
                             const HermitianMatrix& y);

} // namespace qtomo
