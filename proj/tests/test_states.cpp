#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qtomo/states.hpp"

using namespace qtomo;

namespace {

double purity(const HermitianMatrix& rho) {
  double s = 0.0;
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j) s += std::norm(rho.at(i, j));
  return s;
}

double min_eigenvalue(const HermitianMatrix& rho) {
  return oracles::herm_eigvals(rho).front();
}

} // namespace

TEST_SUITE("states") {

TEST_CASE("cat state matches the truncated coefficient formula") {
  const double a = 2.0;
  const int dim = 15;
  const HermitianMatrix rho = make_cat_state(a, dim);

  std::vector<long double> c(dim, 0.0L);
  long double norm = 0.0L;
  for (int n = 0; n < dim; n += 2) {
    long double t = 1.0L;
    for (int k = 1; k <= n; ++k) t *= a / std::sqrt(static_cast<double>(k));
    c[n] = t;
    norm += t * t;
  }
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      const double want = static_cast<double>(c[m] * c[n] / norm);
      CHECK(rho.at(m, n).real() == doctest::Approx(want).epsilon(1e-12));
      CHECK(rho.at(m, n).imag() == 0.0);
    }
}

TEST_CASE("cat state basics") {
  const HermitianMatrix rho = make_cat_state(3.0, 21);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(min_eigenvalue(rho) >= -1e-12);
  for (int m = 1; m < 21; m += 2)
    for (int n = 0; n < 21; ++n) CHECK(std::abs(rho.at(m, n)) == 0.0);

  const HermitianMatrix vac = make_cat_state(0.0, 4);
  CHECK(vac.at(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(vac.at(1, 1)) + std::abs(vac.at(2, 2)) <= 1e-15);
}

TEST_CASE("cat state rejects lossy truncation and bad arguments") {
  CHECK_THROWS_AS((void)make_cat_state(3.0, 5), std::invalid_argument);
  CHECK_THROWS_AS((void)make_cat_state(-1.0, 9), std::invalid_argument);
  CHECK_THROWS_AS((void)make_cat_state(1.0, 0), std::invalid_argument);
}

TEST_CASE("pinem state without jitter is the pure bessel ladder") {
  const double g = 0.6;
  const int dim = 11, half = 5;
  const HermitianMatrix rho = make_pinem_state(g, dim, 0.0, 1, 7);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));

  std::vector<double> b(dim);
  double mass = 0.0;
  for (int m = 0; m < dim; ++m) {
    b[m] = oracles::bessel_series(m - half, 2.0 * g);
    mass += b[m] * b[m];
  }
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      CHECK(rho.at(m, n).real() ==
            doctest::Approx(b[m] * b[n] / mass).epsilon(1e-9));
      CHECK(std::abs(rho.at(m, n).imag()) <= 1e-15);
    }
}

TEST_CASE("phase jitter dephases the off-diagonals") {
  const HermitianMatrix pure = make_pinem_state(0.6, 11, 0.0, 1, 7);
  const HermitianMatrix mixed = make_pinem_state(0.6, 11, 0.3, 500, 7);
  CHECK(mixed.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(mixed) < 0.999);
  CHECK(purity(mixed) > 0.5);
  CHECK(min_eigenvalue(mixed) >= -1e-12);
  for (int m = 0; m < 11; ++m) {
    CHECK(mixed.at(m, m).real() ==
          doctest::Approx(pure.at(m, m).real()).epsilon(1e-12));
    for (int n = m + 1; n < 11; ++n)
      CHECK(std::abs(mixed.at(m, n)) <= std::abs(pure.at(m, n)) + 1e-15);
  }
}

TEST_CASE("pinem state is deterministic in the seed") {
  const HermitianMatrix a = make_pinem_state(0.6, 11, 0.2, 40, 123);
  const HermitianMatrix b = make_pinem_state(0.6, 11, 0.2, 40, 123);
  const HermitianMatrix c = make_pinem_state(0.6, 11, 0.2, 40, 124);
  CHECK(herm_lincomb(1.0, a, -1.0, b).frobenius_norm() == 0.0);
  CHECK(herm_lincomb(1.0, a, -1.0, c).frobenius_norm() > 1e-8);
}

TEST_CASE("pinem state validation") {
  CHECK_THROWS_AS((void)make_pinem_state(0.6, 10, 0.0, 1, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_pinem_state(-0.5, 11, 0.0, 1, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_pinem_state(0.6, 11, -0.1, 1, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_pinem_state(0.6, 11, 0.2, 0, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)make_pinem_state(3.0, 5, 0.0, 1, 7),
                  std::runtime_error);
}

} // TEST_SUITE
