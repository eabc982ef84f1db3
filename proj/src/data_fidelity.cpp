#include "qtomo/data_fidelity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qtomo/kernels.hpp"

namespace qtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shapes(const DataGrid& a, const DataGrid& b, const char* where) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(where) + ": shape mismatch");
}

} // namespace

double fit_value(Fidelity kind, const DataGrid& g_obs, const DataGrid& f) {
  check_shapes(g_obs, f, "fit_value");
  if (kind == Fidelity::l2) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double d = f.v[i] - g_obs.v[i];
      s += d * d;
    }
    return 0.5 * s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g_obs.v[i];
    const double y = f.v[i];
    if (x < 0.0 || y < 0.0 || (x > 0.0 && y == 0.0)) return kInf;
    if (x == 0.0) {
      s += y;
    } else {
      s += y - x + x * std::log(x / y);
    }
  }
  return s;
}

DataGrid fit_grad(Fidelity kind, const DataGrid& g_obs, const DataGrid& f) {
  check_shapes(g_obs, f, "fit_grad");
  DataGrid out(f.n_theta, f.n_l);
  if (kind == Fidelity::l2) {
    out = grid_lincomb(1.0, f, -1.0, g_obs);
    return out;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g_obs.v[i];
    if (x == 0.0) {
      out.v[i] = 1.0;
    } else {
      if (f.v[i] <= 0.0)
        throw std::domain_error(
            "fit_grad: kl gradient undefined at f <= 0 with g_obs > 0");
      out.v[i] = 1.0 - x / f.v[i];
    }
  }
  return out;
}

double fit_conjugate(Fidelity kind, const DataGrid& p,
                     const DataGrid& g_obs) {
  check_shapes(p, g_obs, "fit_conjugate");
  if (kind == Fidelity::l2) {
    const auto& k = kernels::active();
    return k.dot(p.v.data(), g_obs.v.data(), p.size()) +
           0.5 * k.dot(p.v.data(), p.v.data(), p.size());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = g_obs.v[i];
    const double pi = p.v[i];
    if (x > 0.0) {
      if (pi >= 1.0) return kInf;
      s += -x * std::log1p(-pi);
    } else {
      if (pi > 1.0) return kInf;
    }
  }
  return s;
}

DataGrid fit_conj_prox(Fidelity kind, const DataGrid& g_tilde, double nu,
                       const DataGrid& g_obs) {
  check_shapes(g_tilde, g_obs, "fit_conj_prox");
  if (!(nu > 0.0))
    throw std::invalid_argument("fit_conj_prox: nu must be > 0");
  if (kind == Fidelity::l2) {
    return grid_lincomb(1.0 / (1.0 + nu), g_tilde, -nu / (1.0 + nu), g_obs);
  }
  DataGrid out = g_tilde;
  const double min_rad = kernels::active().kl_dual_prox(
      out.v.data(), g_tilde.v.data(), g_obs.v.data(), nu, out.size());
  if (min_rad < -1e-14)
    throw std::domain_error(
        "fit_conj_prox: negative radicand " + std::to_string(min_rad) +
        "; observation grid appears corrupted (negative counts)");
  return out;
}

DataGrid dual_point(Fidelity kind, const DataGrid& g_obs, const DataGrid& f,
                    double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("dual_point: alpha must be > 0");
  DataGrid g = fit_grad(kind, g_obs, f);
  const double scale = -1.0 / alpha;
  for (double& x : g.v) x *= scale;
  return g;
}

const char* fidelity_name(Fidelity kind) {
  return kind == Fidelity::l2 ? "l2" : "kl";
}

Fidelity fidelity_from_name(const std::string& name) {
  if (name == "l2") return Fidelity::l2;
  if (name == "kl") return Fidelity::kl;
  throw std::invalid_argument("unknown fidelity '" + name +
                              "' (expected l2 or kl)");
}

} // namespace qtomo
