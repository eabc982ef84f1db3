#include "qtomo/forward_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qtomo/kernels.hpp"
#include "qtomo/random.hpp"
#include "qtomo/special_functions.hpp"

namespace qtomo {

namespace {

const kernels::KernelTable& K() { return kernels::active(); }

constexpr double kPi = std::numbers::pi;

} // namespace

PhaseKernelOperator::PhaseKernelOperator(int dim, std::vector<double> thetas,
                                         std::vector<double> kernels)
    : dim_(dim), thetas_(std::move(thetas)), kernels_(std::move(kernels)) {
  if (dim_ < 1)
    throw std::invalid_argument("PhaseKernelOperator: dim must be positive");
  if (thetas_.empty())
    throw std::invalid_argument("PhaseKernelOperator: no phases");
  const std::size_t block = static_cast<std::size_t>(dim_) * dim_;
  if (kernels_.empty() || kernels_.size() % block != 0)
    throw std::invalid_argument(
        "PhaseKernelOperator: kernel size is not a multiple of dim*dim");
  n_l_ = static_cast<int>(kernels_.size() / block);

  phase_.resize(thetas_.size() * 2 * dim_);
  for (std::size_t t = 0; t < thetas_.size(); ++t) {
    double* row = &phase_[t * 2 * dim_];
    for (int d = 0; d < dim_; ++d) {
      row[2 * d] = std::cos(d * thetas_[t]);
      row[2 * d + 1] = -std::sin(d * thetas_[t]);
    }
  }

  norm_bound_ = norm_estimate(*this, 30);
}

DataGrid PhaseKernelOperator::apply(const HermitianMatrix& rho) const {
  if (rho.dim() != dim_)
    throw std::invalid_argument("apply: matrix dimension mismatch");
  const int n = dim_;
  const std::size_t nn = static_cast<std::size_t>(n);

  // diag[l][d] = sum_m K^(l)[m][m+d] * rho[m][m+d], with the d = 0 entry
  // halved so the phase synthesis below is a plain real dot product
  std::vector<cplx> diag(static_cast<std::size_t>(n_l_) * nn, cplx{});
  for (int l = 0; l < n_l_; ++l) {
    cplx* dl = &diag[l * nn];
    const double* kl = kernel(l);
    for (int m = 0; m < n; ++m)
      K().cmuladd_rw(dl, kl + m * nn + m, rho.data() + m * nn + m, nn - m);
    dl[0] = cplx(0.5 * dl[0].real(), 0.0);
  }

  DataGrid out(n_theta(), n_l_);
  for (int t = 0; t < n_theta(); ++t) {
    const double* pt = &phase_[static_cast<std::size_t>(t) * 2 * nn];
    for (int l = 0; l < n_l_; ++l) {
      out.at(t, l) = 2.0 * K().dot(pt,
                                   reinterpret_cast<const double*>(&diag[l * nn]),
                                   2 * nn);
    }
  }
  return out;
}

HermitianMatrix PhaseKernelOperator::adjoint(const DataGrid& g) const {
  if (g.n_theta != n_theta() || g.n_l != n_l_)
    throw std::invalid_argument("adjoint: grid shape mismatch");
  const int n = dim_;
  const std::size_t nn = static_cast<std::size_t>(n);

  // gc[l][d] = sum_t g(t,l) * (cos(d th_t), -sin(d th_t))
  std::vector<double> gc(static_cast<std::size_t>(n_l_) * 2 * nn, 0.0);
  for (int t = 0; t < n_theta(); ++t) {
    const double* pt = &phase_[static_cast<std::size_t>(t) * 2 * nn];
    for (int l = 0; l < n_l_; ++l)
      K().axpy(&gc[static_cast<std::size_t>(l) * 2 * nn], g.at(t, l), pt,
               2 * nn);
  }

  HermitianMatrix out(n);
  for (int l = 0; l < n_l_; ++l) {
    const double* kl = kernel(l);
    const auto* gl =
        reinterpret_cast<const cplx*>(&gc[static_cast<std::size_t>(l) * 2 * nn]);
    for (int m = 0; m < n; ++m)
      K().cmuladd_rw(out.data() + m * nn + m, kl + m * nn + m, gl, nn - m);
  }
  for (int i = 0; i < n; ++i) {
    out.data()[i * nn + i] = cplx(out.data()[i * nn + i].real(), 0.0);
    for (int j = i + 1; j < n; ++j)
      out.data()[j * nn + i] = std::conj(out.data()[i * nn + j]);
  }
  return out;
}

PinemModel pinem_build(int dim, double coupling, int n_theta) {
  if (dim < 1 || dim % 2 == 0)
    throw std::invalid_argument("pinem_build: dim must be odd and positive");
  if (n_theta < 1)
    throw std::invalid_argument("pinem_build: n_theta must be positive");
  if (!std::isfinite(coupling) || coupling < 0.0)
    throw std::invalid_argument(
        "pinem_build: coupling must be finite and >= 0");

  const int half = (dim - 1) / 2;
  const int extra = static_cast<int>(std::ceil(2.0 * coupling)) + 20;
  const int out_half = half + extra;
  const int n_l = dim + 2 * extra;
  const int bess_half = dim - 1 + extra;
  std::vector<double> bessel = bessel_j_row(2.0 * coupling, bess_half);

  for (int m = -half; m <= half; ++m) {
    double s = 0.0;
    for (int l = out_half; l >= -out_half; --l) {
      const double j = bessel[bess_half + (l - m)];
      s += j * j;
    }
    if (std::abs(s - 1.0) > 1e-8)
      throw std::runtime_error(
          "pinem_build: output channel window leaks probability " +
          std::to_string(std::abs(s - 1.0)) +
          " at level " + std::to_string(m) + "; enlarge the channel margin");
  }

  std::vector<double> kernels(static_cast<std::size_t>(n_l) * dim * dim);
  for (int l = 0; l < n_l; ++l) {
    double* kl = kernels.data() + static_cast<std::size_t>(l) * dim * dim;
    const int l_phys = l - out_half;
    for (int m = 0; m < dim; ++m) {
      const double jm = bessel[bess_half + (l_phys - (m - half))];
      for (int j = 0; j < dim; ++j)
        kl[m * dim + j] = jm * bessel[bess_half + (l_phys - (j - half))];
    }
  }

  std::vector<double> thetas(n_theta);
  for (int t = 0; t < n_theta; ++t)
    thetas[t] = -kPi + 2.0 * kPi * t / n_theta;

  return PinemModel{dim, coupling, extra, std::move(bessel),
                    PhaseKernelOperator(dim, std::move(thetas),
                                        std::move(kernels))};
}

DataGrid pinem_apply(const PinemModel& m, const HermitianMatrix& rho) {
  return m.op.apply(rho);
}

HermitianMatrix pinem_adjoint(const PinemModel& m, const DataGrid& g) {
  return m.op.adjoint(g);
}

HomodyneModel homodyne_build(int dim, int n_theta, double x_min, double x_max,
                             int n_bins, int quad_order) {
  if (dim < 1 || dim - 1 > 200)
    throw std::invalid_argument("homodyne_build: dim must be in [1, 201]");
  if (n_theta < 1)
    throw std::invalid_argument("homodyne_build: n_theta must be positive");
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("homodyne_build: need finite x_min < x_max");
  if (n_bins < 1)
    throw std::invalid_argument("homodyne_build: n_bins must be positive");
  if (quad_order < 4)
    throw std::invalid_argument("homodyne_build: quad_order must be >= 4");

  const double h = (x_max - x_min) / n_bins;
  const std::size_t block = static_cast<std::size_t>(dim) * dim;

  // bin integrals of u_m u_n (into bmats) and of u_m (into cints)
  auto integrate = [&](int order, std::vector<double>& bmats,
                       std::vector<double>& cints) {
    bmats.assign(static_cast<std::size_t>(n_bins) * block, 0.0);
    cints.assign(static_cast<std::size_t>(n_bins) * dim, 0.0);
    for (int l = 0; l < n_bins; ++l) {
      const double lo = x_min + (x_max - x_min) * l / n_bins;
      const double hi = x_min + (x_max - x_min) * (l + 1) / n_bins;
      const Quadrature q = gauss_legendre(order, lo, hi);
      double* bl = bmats.data() + static_cast<std::size_t>(l) * block;
      double* cl = cints.data() + static_cast<std::size_t>(l) * dim;
      for (int k = 0; k < order; ++k) {
        const std::vector<double> u = hermite_fn(dim - 1, q.nodes[k]);
        const double w = q.weights[k];
        for (int m = 0; m < dim; ++m) {
          cl[m] += w * u[m];
          const double wm = w * u[m];
          for (int j = m; j < dim; ++j) bl[m * dim + j] += wm * u[j];
        }
      }
      for (int m = 0; m < dim; ++m)
        for (int j = m + 1; j < dim; ++j) bl[j * dim + m] = bl[m * dim + j];
    }
  };

  std::vector<double> bmats, cints, bmats2, cints2;
  integrate(quad_order, bmats, cints);
  integrate(2 * quad_order, bmats2, cints2);
  double dev = 0.0;
  for (std::size_t i = 0; i < bmats.size(); ++i)
    dev = std::max(dev, std::abs(bmats[i] - bmats2[i]));
  for (std::size_t i = 0; i < cints.size(); ++i)
    dev = std::max(dev, std::abs(cints[i] - cints2[i]));
  if (dev > 1e-10)
    throw std::runtime_error(
        "homodyne_build: quadrature not converged, order doubling moved the "
        "bin integrals by " + std::to_string(dev) +
        "; raise quad_order");

  for (int m = 0; m < dim; ++m) {
    double s = 0.0;
    for (int l = 0; l < n_bins; ++l)
      s += bmats[static_cast<std::size_t>(l) * block + m * dim + m];
    if (s > 1.0 + 1e-8)
      throw std::runtime_error(
          "homodyne_build: bin overlaps of level " + std::to_string(m) +
          " sum to " + std::to_string(s) + " > 1");
  }

  // basis kernel h * (c/sqrt(h)) outer (c/sqrt(h)) reduces to the raw
  // integral outer product
  std::vector<double> basis(static_cast<std::size_t>(n_bins) * block);
  for (int l = 0; l < n_bins; ++l) {
    const double* cl = cints.data() + static_cast<std::size_t>(l) * dim;
    double* kl = basis.data() + static_cast<std::size_t>(l) * block;
    for (int m = 0; m < dim; ++m)
      for (int j = 0; j < dim; ++j) kl[m * dim + j] = cl[m] * cl[j];
  }

  std::vector<double> thetas(n_theta);
  for (int t = 0; t < n_theta; ++t) thetas[t] = kPi * t / n_theta;

  std::vector<double> overlaps(cints.size());
  const double inv_sqrt_h = 1.0 / std::sqrt(h);
  for (std::size_t i = 0; i < cints.size(); ++i)
    overlaps[i] = cints[i] * inv_sqrt_h;

  return HomodyneModel{dim,
                       x_min,
                       x_max,
                       h,
                       std::move(overlaps),
                       PhaseKernelOperator(dim, thetas, std::move(bmats)),
                       PhaseKernelOperator(dim, thetas, std::move(basis))};
}

DataGrid homodyne_apply(const HomodyneModel& m, const HermitianMatrix& rho,
                        HomodyneVariant variant) {
  return variant == HomodyneVariant::semi ? m.semi.apply(rho)
                                          : m.basis.apply(rho);
}

HermitianMatrix homodyne_adjoint(const HomodyneModel& m, const DataGrid& g,
                                 HomodyneVariant variant) {
  return variant == HomodyneVariant::semi ? m.semi.adjoint(g)
                                          : m.basis.adjoint(g);
}

double norm_estimate(const ForwardModel& model, int iters) {
  if (iters < 20)
    throw std::invalid_argument("norm_estimate: iters must be >= 20");
  const int n = model.dim();
  CounterRng rng(0x706f776572ull);
  HermitianMatrix x(n);
  for (int i = 0; i < n; ++i) {
    x.set(i, i, rng.next_uniform(-1.0, 1.0));
    for (int j = i + 1; j < n; ++j) {
      const double re = rng.next_uniform(-1.0, 1.0);
      const double im = rng.next_uniform(-1.0, 1.0);
      x.set(i, j, cplx(re, im));
    }
  }
  double fn = x.frobenius_norm();
  if (fn == 0.0) x = HermitianMatrix::identity(n);
  fn = x.frobenius_norm();
  x = herm_lincomb(1.0 / fn, x, 0.0, x);

  double rayleigh = 0.0;
  for (int it = 0; it < iters; ++it) {
    const HermitianMatrix y = model.adjoint(model.apply(x));
    rayleigh = trace_inner(x, y);
    const double yn = y.frobenius_norm();
    if (yn == 0.0) return 0.0;
    x = herm_lincomb(1.0 / yn, y, 0.0, y);
  }
  return 1.05 * rayleigh;
}

} // namespace qtomo
