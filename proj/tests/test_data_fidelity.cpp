#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qtomo/data_fidelity.hpp"
#include "qtomo/random.hpp"

using namespace qtomo;

namespace {

DataGrid grid(int nt, int nl, const std::vector<double>& vals) {
  DataGrid g(nt, nl);
  g.v = vals;
  return g;
}

DataGrid random_grid(CounterRng& rng, int nt, int nl, double lo, double hi) {
  DataGrid g(nt, nl);
  for (auto& x : g.v) x = rng.next_uniform(lo, hi);
  return g;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_SUITE("data_fidelity") {

TEST_CASE("l2 value and gradient closed forms") {
  CounterRng rng(0x12f);
  const DataGrid g_obs = random_grid(rng, 3, 4, 0.0, 2.0);
  const DataGrid f = random_grid(rng, 3, 4, -1.0, 3.0);
  double expect = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.v[i] - g_obs.v[i];
    expect += 0.5 * d * d;
  }
  CHECK(fit_value(Fidelity::l2, g_obs, f) ==
        doctest::Approx(expect).epsilon(1e-14));
  const DataGrid gr = fit_grad(Fidelity::l2, g_obs, f);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(gr.v[i] == doctest::Approx(f.v[i] - g_obs.v[i]));
}

TEST_CASE("kl value case table") {
  const DataGrid x = grid(1, 4, {2.0, 0.0, 1.5, 0.0});
  SUBCASE("interior point") {
    const DataGrid f = grid(1, 4, {1.0, 0.7, 1.5, 0.0});
    const double expect =
        (1.0 - 2.0 + 2.0 * std::log(2.0 / 1.0)) + 0.7 + 0.0 + 0.0;
    CHECK(fit_value(Fidelity::kl, x, f) ==
          doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("f zero where data positive") {
    const DataGrid f = grid(1, 4, {0.0, 0.7, 1.5, 0.0});
    CHECK(fit_value(Fidelity::kl, x, f) == kInf);
  }
  SUBCASE("negative f") {
    const DataGrid f = grid(1, 4, {1.0, -0.1, 1.5, 0.0});
    CHECK(fit_value(Fidelity::kl, x, f) == kInf);
  }
  SUBCASE("zero at zero costs nothing") {
    const DataGrid z(1, 4);
    CHECK(fit_value(Fidelity::kl, DataGrid(1, 4), z) == 0.0);
  }
}

TEST_CASE("kl gradient: formula, finite differences, domain") {
  const DataGrid x = grid(1, 3, {2.0, 0.0, 0.5});
  const DataGrid f = grid(1, 3, {1.2, 0.8, 0.9});
  const DataGrid gr = fit_grad(Fidelity::kl, x, f);
  CHECK(gr.v[0] == doctest::Approx(1.0 - 2.0 / 1.2));
  CHECK(gr.v[1] == doctest::Approx(1.0));
  CHECK(gr.v[2] == doctest::Approx(1.0 - 0.5 / 0.9));

  const double h = 1e-6;
  for (std::size_t i = 0; i < f.size(); ++i) {
    DataGrid fp = f, fm = f;
    fp.v[i] += h;
    fm.v[i] -= h;
    const double fd = (fit_value(Fidelity::kl, x, fp) -
                       fit_value(Fidelity::kl, x, fm)) /
                      (2.0 * h);
    CHECK(fd == doctest::Approx(gr.v[i]).epsilon(1e-6));
  }

  const DataGrid bad = grid(1, 3, {0.0, 0.8, 0.9});
  CHECK_THROWS_AS((void)fit_grad(Fidelity::kl, x, bad), std::domain_error);
}

TEST_CASE("conjugates match a pointwise supremum oracle") {
  CounterRng rng(0xC043);
  const DataGrid g_obs = grid(1, 3, {1.4, 0.0, 0.6});

  SUBCASE("l2") {
    const DataGrid p = random_grid(rng, 1, 3, -2.0, 2.0);
    double expect = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto neg = [&](double f) {
        const double d = f - g_obs.v[i];
        return -(p.v[i] * f - 0.5 * d * d);
      };
      expect += -neg(oracles::golden_min(neg, -50.0, 50.0));
    }
    CHECK(fit_conjugate(Fidelity::l2, p, g_obs) ==
          doctest::Approx(expect).epsilon(1e-8));
  }

  SUBCASE("kl interior") {
    const DataGrid p = grid(1, 3, {0.4, -0.3, -1.5});
    double expect = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double xi = g_obs.v[i];
      auto neg = [&](double f) {
        double val;
        if (xi == 0.0)
          val = f;
        else
          val = f - xi + xi * std::log(xi / f);
        return -(p.v[i] * f - val);
      };
      expect += -neg(oracles::golden_min(neg, 1e-9, 80.0));
    }
    CHECK(fit_conjugate(Fidelity::kl, p, g_obs) ==
          doctest::Approx(expect).epsilon(1e-7));
  }

  SUBCASE("kl out of band") {
    CHECK(fit_conjugate(Fidelity::kl, grid(1, 3, {1.0, 0.0, 0.0}), g_obs) ==
          kInf);
    CHECK(fit_conjugate(Fidelity::kl, grid(1, 3, {0.0, 1.1, 0.0}), g_obs) ==
          kInf);
    CHECK(fit_conjugate(Fidelity::kl, grid(1, 3, {0.0, 1.0, 0.0}), g_obs) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("dual prox: l2 closed form and kl against a minimizer oracle") {
  CounterRng rng(0xD09);
  const DataGrid g_obs = grid(2, 2, {1.7, 0.0, 0.25, 3.0});
  const DataGrid gt = random_grid(rng, 2, 2, -2.0, 2.0);

  SUBCASE("l2") {
    for (double nu : {0.3, 1.0, 4.0}) {
      const DataGrid out = fit_conj_prox(Fidelity::l2, gt, nu, g_obs);
      for (std::size_t i = 0; i < gt.size(); ++i)
        CHECK(out.v[i] ==
              doctest::Approx((gt.v[i] - nu * g_obs.v[i]) / (1.0 + nu)));
    }
  }

  SUBCASE("kl against golden section") {
    for (double nu : {0.2, 1.0, 5.0}) {
      const DataGrid out = fit_conj_prox(Fidelity::kl, gt, nu, g_obs);
      for (std::size_t i = 0; i < gt.size(); ++i) {
        const double xi = g_obs.v[i];
        auto obj = [&](double p) {
          const double conj = xi == 0.0 ? 0.0 : -xi * std::log(1.0 - p);
          const double d = p - gt.v[i];
          return 0.5 * d * d + nu * conj;
        };
        const double ref = oracles::golden_min(obj, -60.0, 1.0 - 1e-12);
        CAPTURE(nu);
        CAPTURE(i);
        CHECK(out.v[i] == doctest::Approx(ref).epsilon(5e-7));
        CHECK(out.v[i] <= 1.0);
      }
    }
  }

  SUBCASE("kl prox satisfies its stationarity equation") {
    const DataGrid out = fit_conj_prox(Fidelity::kl, gt, 0.8, g_obs);
    for (std::size_t i = 0; i < gt.size(); ++i) {
      const double p = out.v[i];
      const double resid =
          (p - gt.v[i]) * (1.0 - p) + 0.8 * g_obs.v[i];
      CHECK(std::abs(resid) <= 1e-12);
    }
  }

  SUBCASE("negative radicand rejected") {
    const DataGrid bad = grid(1, 1, {-1.0});
    CHECK_THROWS_AS(
        (void)fit_conj_prox(Fidelity::kl, grid(1, 1, {1.0}), 1.0, bad),
        std::domain_error);
  }
}

TEST_CASE("dual point scales the gradient") {
  CounterRng rng(0xDEA1);
  const DataGrid g_obs = random_grid(rng, 2, 3, 0.1, 2.0);
  const DataGrid f = random_grid(rng, 2, 3, 0.5, 2.5);
  for (Fidelity kind : {Fidelity::l2, Fidelity::kl}) {
    const DataGrid gr = fit_grad(kind, g_obs, f);
    const DataGrid dp = dual_point(kind, g_obs, f, 0.25);
    for (std::size_t i = 0; i < f.size(); ++i)
      CHECK(dp.v[i] == doctest::Approx(-gr.v[i] / 0.25));
  }
}

TEST_CASE("fidelity names round-trip") {
  CHECK(fidelity_from_name("l2") == Fidelity::l2);
  CHECK(fidelity_from_name("kl") == Fidelity::kl);
  CHECK(fidelity_name(Fidelity::l2) == std::string("l2"));
  CHECK(fidelity_name(Fidelity::kl) == std::string("kl"));
  CHECK_THROWS_AS((void)fidelity_from_name("huber"), std::invalid_argument);
}

} // TEST_SUITE
