#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "qtomo/kernels.hpp"
#include "qtomo/random.hpp"

using qtomo::CounterRng;
using qtomo::kernels::cplx;
using qtomo::kernels::KernelTable;

namespace {

const std::vector<std::size_t> kSizes = {0,  1,  2,  3,   4,   5,  7,
                                         8,  9,  15, 16,  33,  128, 1001};

struct Inputs {
  std::vector<double> x, y, gt, gobs;
  std::vector<cplx> cx, cy, cz;
  explicit Inputs(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed, n);
    x.resize(n);
    y.resize(n);
    gt.resize(n);
    gobs.resize(n);
    cx.resize(n);
    cy.resize(n);
    cz.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.next_normal();
      y[i] = rng.next_normal();
      gt[i] = rng.next_uniform(-1.5, 1.5);
      gobs[i] = rng.next_uniform(0.0, 3.0);
      cx[i] = cplx(rng.next_normal(), rng.next_normal());
      cy[i] = cplx(rng.next_normal(), rng.next_normal());
      cz[i] = cplx(rng.next_normal(), rng.next_normal());
    }
  }
};

// The wide variants fuse multiplications and additions, so results may
// differ from the scalar path by rounding of the fused terms; compare with
// tight absolute tolerances sized for the O(1) test data.
void compare_tables(const KernelTable& a, const KernelTable& b) {
  constexpr double kTol = 5e-13;
  for (std::size_t n : kSizes) {
    const Inputs in(n, 0x7461626c);
    CAPTURE(n);

    CHECK(std::abs(a.dot(in.x.data(), in.y.data(), n) -
                   b.dot(in.x.data(), in.y.data(), n)) <=
          1e-12 * (1.0 + n));

    {
      std::vector<double> ya = in.y, yb = in.y;
      a.axpy(ya.data(), 0.77, in.x.data(), n);
      b.axpy(yb.data(), 0.77, in.x.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(ya[i] - yb[i]) <= kTol);
    }
    {
      std::vector<double> ya = in.y, yb = in.y;
      a.axpby(ya.data(), 1.3, in.x.data(), -0.4, n);
      b.axpby(yb.data(), 1.3, in.x.data(), -0.4, n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(ya[i] - yb[i]) <= kTol);
    }
    {
      std::vector<cplx> da = in.cy, db = in.cy;
      a.cmuladd_rw(da.data(), in.x.data(), in.cx.data(), n);
      b.cmuladd_rw(db.data(), in.x.data(), in.cx.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(da[i] - db[i]) <= kTol);
    }
    {
      const cplx ra = a.dotc(in.cx.data(), in.cy.data(), n);
      const cplx rb = b.dotc(in.cx.data(), in.cy.data(), n);
      CHECK(std::abs(ra - rb) <= 1e-12 * (1.0 + n));
    }
    {
      std::vector<cplx> ya = in.cy, yb = in.cy;
      const cplx s(0.6, -1.1);
      a.zaxpy(ya.data(), s, in.cx.data(), n);
      b.zaxpy(yb.data(), s, in.cx.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(ya[i] - yb[i]) <= kTol);
    }
    {
      std::vector<cplx> xa = in.cx, xb = in.cx, ya = in.cy, yb = in.cy;
      const cplx s(0.48, -0.36);
      const double c = std::sqrt(1.0 - std::norm(s));
      a.rot(xa.data(), ya.data(), c, s, n);
      b.rot(xb.data(), yb.data(), c, s, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(xa[i] - xb[i]) <= kTol);
        CHECK(std::abs(ya[i] - yb[i]) <= kTol);
      }
    }
    {
      std::vector<double> oa(n), ob(n);
      const double ra =
          a.kl_dual_prox(oa.data(), in.gt.data(), in.gobs.data(), 0.7, n);
      const double rb =
          b.kl_dual_prox(ob.data(), in.gt.data(), in.gobs.data(), 0.7, n);
      CHECK(std::abs(ra - rb) <= kTol);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(oa[i] - ob[i]) <= kTol);
    }
  }
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar semantics match naive loops") {
  for (std::size_t n : kSizes) {
    const Inputs in(n, 0x73636c72);
    const auto& k = qtomo::kernels::scalar_table();
    CAPTURE(n);

    double dref = 0.0;
    for (std::size_t i = 0; i < n; ++i) dref += in.x[i] * in.y[i];
    CHECK(std::abs(k.dot(in.x.data(), in.y.data(), n) - dref) <=
          1e-12 * (1.0 + std::abs(dref)));

    std::vector<double> yk = in.y;
    k.axpy(yk.data(), 2.5, in.x.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(yk[i] == doctest::Approx(in.y[i] + 2.5 * in.x[i]).epsilon(1e-14));

    yk = in.y;
    k.axpby(yk.data(), 0.5, in.x.data(), -2.0, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(yk[i] ==
            doctest::Approx(0.5 * in.x[i] - 2.0 * in.y[i]).epsilon(1e-14));

    std::vector<cplx> ck = in.cy;
    k.cmuladd_rw(ck.data(), in.x.data(), in.cx.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(ck[i] - (in.cy[i] + in.x[i] * in.cx[i])) <= 1e-14);

    cplx dc{};
    for (std::size_t i = 0; i < n; ++i) dc += in.cx[i] * std::conj(in.cy[i]);
    CHECK(std::abs(k.dotc(in.cx.data(), in.cy.data(), n) - dc) <=
          1e-12 * (1.0 + std::abs(dc)));

    ck = in.cy;
    const cplx s(1.2, 0.3);
    k.zaxpy(ck.data(), s, in.cx.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(ck[i] - (in.cy[i] + s * in.cx[i])) <= 1e-14);
  }
}

TEST_CASE("rot is the stated plane rotation and preserves norms") {
  const std::size_t n = 37;
  const Inputs in(n, 0x726f74);
  const auto& k = qtomo::kernels::scalar_table();
  const cplx s(0.3, 0.4);
  const double c = std::sqrt(1.0 - std::norm(s));

  std::vector<cplx> x = in.cx, y = in.cy;
  k.rot(x.data(), y.data(), c, s, n);
  double before = 0.0, after = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(x[i] - (c * in.cx[i] - s * in.cy[i])) <= 1e-14);
    CHECK(std::abs(y[i] - (std::conj(s) * in.cx[i] + c * in.cy[i])) <= 1e-14);
    before += std::norm(in.cx[i]) + std::norm(in.cy[i]);
    after += std::norm(x[i]) + std::norm(y[i]);
  }
  CHECK(after == doctest::Approx(before).epsilon(1e-13));
}

TEST_CASE("kl_dual_prox formula, aliasing, and radicand minimum") {
  const std::size_t n = 19;
  const Inputs in(n, 0x6b6c);
  const auto& k = qtomo::kernels::scalar_table();

  std::vector<double> out(n);
  const double minrad =
      k.kl_dual_prox(out.data(), in.gt.data(), in.gobs.data(), 0.9, n);
  double expect_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double half = 0.5 * (1.0 - in.gt[i]);
    const double rad = half * half + 0.9 * in.gobs[i];
    expect_min = std::min(expect_min, rad);
    const double expect =
        0.5 * (1.0 + in.gt[i]) - std::sqrt(std::max(rad, 0.0));
    CHECK(out[i] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(out[i] < 1.0);  // dual iterates stay strictly below one
  }
  CHECK(minrad == doctest::Approx(expect_min).epsilon(1e-14));

  std::vector<double> alias = in.gt;
  const double minrad2 =
      k.kl_dual_prox(alias.data(), alias.data(), in.gobs.data(), 0.9, n);
  CHECK(minrad2 == minrad);
  for (std::size_t i = 0; i < n; ++i) CHECK(alias[i] == out[i]);

  CHECK(k.kl_dual_prox(nullptr, nullptr, nullptr, 1.0, 0) == 0.0);
}

TEST_CASE("active table matches the scalar reference") {
  compare_tables(qtomo::kernels::active(), qtomo::kernels::scalar_table());
}

TEST_CASE("avx2 table matches the scalar reference when present") {
  const KernelTable* wide = qtomo::kernels::avx2_table();
  if (wide == nullptr) return;
  compare_tables(*wide, qtomo::kernels::scalar_table());
}

} // TEST_SUITE
