#pragma once

#include <vector>

#include "qtomo/data_grid.hpp"
#include "qtomo/hermitian.hpp"

namespace qtomo {

// Linear map from density matrices to phase-resolved channel data, together
// with its adjoint and a cached upper bound on ||T*T||.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual int dim() const = 0;
  virtual int n_theta() const = 0;
  virtual int n_l() const = 0;
  virtual DataGrid apply(const HermitianMatrix& rho) const = 0;
  virtual HermitianMatrix adjoint(const DataGrid& g) const = 0;
  virtual double norm_bound() const = 0;
};

// Shared implementation for operators of the form
//   (T rho)(theta, l) = sum_{m,n} rho_{mn} e^{i(n-m)theta} K^(l)_{mn}
// with real symmetric per-channel kernels K^(l).  The forward pass collapses
// each kernel against the matrix diagonals and synthesizes the phase factor
// with a precomputed (cos, -sin) table; the adjoint accumulates the data
// back through the same table.
class PhaseKernelOperator final : public ForwardModel {
 public:
  // kernels: n_l blocks of dim*dim row-major real symmetric entries.
  PhaseKernelOperator(int dim, std::vector<double> thetas,
                      std::vector<double> kernels);

  int dim() const override { return dim_; }
  int n_theta() const override { return static_cast<int>(thetas_.size()); }
  int n_l() const override { return n_l_; }
  DataGrid apply(const HermitianMatrix& rho) const override;
  HermitianMatrix adjoint(const DataGrid& g) const override;
  double norm_bound() const override { return norm_bound_; }

  const std::vector<double>& thetas() const { return thetas_; }
  const double* kernel(int l) const {
    return kernels_.data() + static_cast<std::size_t>(l) * dim_ * dim_;
  }

 private:
  int dim_ = 0;
  int n_l_ = 0;
  std::vector<double> thetas_;
  std::vector<double> kernels_;
  // per-theta interleaved row [cos(0), -sin(0), cos(th), -sin(th), ...,
  // cos((dim-1) th), -sin((dim-1) th)]
  std::vector<double> phase_;
  double norm_bound_ = 0.0;
};

// Electron-photon interaction model: channel l couples Fock-like levels m, n
// through Bessel factors, K^(l)_{mn} = J_{l-m}(2g) J_{l-n}(2g), with the
// output channel window enlarged so each per-phase column sums to tr(rho).
struct PinemModel {
  int dim = 0;                 // odd; levels -half..half
  double coupling = 0.0;       // g
  int extra_halfwidth = 0;     // K; output channels span dim + 2K values
  std::vector<double> bessel;  // J_{-(dim-1+K)}..J_{dim-1+K} at 2g
  PhaseKernelOperator op;
};

// n_theta phases equally spaced on [-pi, pi).  Throws when the enlarged
// channel window loses more than 1e-8 of per-phase probability.
PinemModel pinem_build(int dim, double coupling, int n_theta);

DataGrid pinem_apply(const PinemModel& m, const HermitianMatrix& rho);
HermitianMatrix pinem_adjoint(const PinemModel& m, const DataGrid& g);

enum class HomodyneVariant { semi, basis };

// Quadrature-histogram model on n_bins equal bins over [x_min, x_max] with
// n_theta phases equally spaced on [0, pi).  Two discretizations share the
// geometry:
//   semi:  K^(l)_{mn} = integral over bin l of u_m(x) u_n(x) dx
//   basis: K^(l)_{mn} = h * c^(l)_m c^(l)_n with c^(l)_m the normalized
//          bin-indicator overlap h^{-1/2} * integral over bin l of u_m
// where u_m are the normalized Hermite functions and h the bin width.
struct HomodyneModel {
  int dim = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double bin_width = 0.0;
  std::vector<double> overlaps;  // c^(l)_m, n_bins rows of dim entries
  PhaseKernelOperator semi;
  PhaseKernelOperator basis;
};

// Bin integrals use Gauss-Legendre quadrature of quad_order nodes per bin
// and are validated against the doubled order; disagreement beyond 1e-10
// throws.
HomodyneModel homodyne_build(int dim, int n_theta, double x_min, double x_max,
                             int n_bins, int quad_order = 40);

DataGrid homodyne_apply(const HomodyneModel& m, const HermitianMatrix& rho,
                        HomodyneVariant variant);
HermitianMatrix homodyne_adjoint(const HomodyneModel& m, const DataGrid& g,
                                 HomodyneVariant variant);

// Power iteration on rho -> T*(T rho) from a fixed seeded start; returns the
// final Rayleigh quotient inflated by 5%.  Requires iters >= 20.
double norm_estimate(const ForwardModel& model, int iters);

} // namespace qtomo
