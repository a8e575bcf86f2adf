#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "snlevy/errors.hpp"
#include "snlevy/mittag_leffler.hpp"
#include "snlevy/quadrature.hpp"
#include "snlevy/scale_functions.hpp"

using namespace snlevy;

namespace {
const LevyModel kBrownian = BrownianDrift{1.0, 1.0};
const LevyModel kCl = CramerLundbergExp{2.0, 1.0, 1.0};
const LevyModel kStable = StableSpectralNeg{1.5, 1.0};
const LevyModel kHyper =
    HyperExpJumpDiffusion{1.0, 0.5, 1.5, {0.6, 0.4}, {1.0, 3.0}};
const LevyModel kAll[] = {kBrownian, kCl, kStable, kHyper};
}  // namespace

TEST_CASE("boundary and trivial values") {
  CHECK(scale_eval(kCl, 0.37, 0.0).w == doctest::Approx(0.5).epsilon(1e-14));
  auto below = scale_eval(kBrownian, 1.0, -0.5);
  CHECK(below.w == 0.0);
  CHECK(below.wbar == 0.0);
  CHECK(below.z == 1.0);
  CHECK(below.zbar == doctest::Approx(-0.5));
  CHECK_THROWS_AS(scale_eval(kCl, 0.0, 1.0), std::domain_error);
}

TEST_CASE("driftless Brownian reduces to sinh") {
  LevyModel m = BrownianDrift{0.0, std::sqrt(2.0)};
  ScaleFunction sf(m, 1.0);
  CHECK(sf.w(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
  CHECK(sf.w_derivative(1.0, 1) ==
        doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
}

TEST_CASE("values at zero") {
  auto cl = w_zero_values(kCl, 0.1);
  CHECK(cl.first == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cl.second == doctest::Approx(0.275).epsilon(1e-14));
  auto bm = w_zero_values(kBrownian, 1.0);
  CHECK(bm.first == 0.0);
  CHECK(bm.second == doctest::Approx(2.0));
  auto st = w_zero_values(kStable, 1.0);
  CHECK(st.first == 0.0);
  CHECK(std::isinf(st.second));
  // first derivative limit consistency for bounded variation
  CHECK(w_derivatives(kCl, 0.1, 1e-9, 1) ==
        doctest::Approx(0.275).epsilon(1e-6));
}

TEST_CASE("desk-case values against an independent oracle") {
  // frozen from a 30-digit evaluation of the two-root representation
  ScaleFunction sf(kCl, 0.1);
  CHECK(sf.w(1.0) == doctest::Approx(0.7341553143658435).epsilon(1e-12));
  CHECK(sf.w(2.0) == doctest::Approx(0.9131419817385288).epsilon(1e-12));
  CHECK(sf.w_derivative(2.0, 1) ==
        doctest::Approx(0.16159233965938213).epsilon(1e-12));
  CHECK(sf.z(1.0) == doctest::Approx(1.0623228586145414).epsilon(1e-12));
  CHECK(sf.zbar(1.0) == doctest::Approx(1.0292163562625596).epsilon(1e-12));
  auto r = psi_roots(kCl, 0.1);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-0.5422144385112380).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.09221443851123801).epsilon(1e-12));
}

TEST_CASE("explicit two-exponential forms") {
  // Cramer-Lundberg: W(x) = (A+ e^{q+ x} - A- e^{q- x})/p with
  // A+- = (mu + q+-)/(q+ - q-); Brownian: difference of two exponentials
  // with rates delta -+ omega. Both must coincide with the residue route.
  double p = 2.0, mu = 1.0, q = 0.1;
  double qp = 0.09221443851123801, qm = -0.5422144385112380;
  double Ap = (mu + qp) / (qp - qm), Am = (mu + qm) / (qp - qm);
  ScaleFunction cl(kCl, q);
  for (double x : {0.3, 1.0, 2.7})
    CHECK(cl.w(x) == doctest::Approx((Ap * std::exp(qp * x) -
                                      Am * std::exp(qm * x)) /
                                     p)
                         .epsilon(1e-12));
  double mb = 1.0, sb = 1.0;
  double delta = std::sqrt(mb * mb + 2.0 * q * sb * sb) / (sb * sb);
  double om = mb / (sb * sb);
  ScaleFunction bm(kBrownian, q);
  for (double x : {0.3, 1.0, 2.7})
    CHECK(bm.w(x) == doctest::Approx((std::exp((delta - om) * x) -
                                      std::exp(-(delta + om) * x)) /
                                     (sb * sb * delta))
                         .epsilon(1e-12));
}

TEST_CASE("hyperexponential roots interlace the claim rates") {
  auto r = psi_roots(kHyper, 0.1);
  REQUIRE(r.size() == 4);  // sigma > 0: n + 2 roots
  CHECK(r[0] == doctest::Approx(-9.639351249632205).epsilon(1e-10));
  CHECK(r[1] == doctest::Approx(-2.5405769184533169).epsilon(1e-10));
  CHECK(r[2] == doctest::Approx(-0.23575767973807207).epsilon(1e-10));
  CHECK(r[3] == doctest::Approx(0.41568584782359378).epsilon(1e-10));
  LevyModel bv = HyperExpJumpDiffusion{1.0, 0.0, 1.5, {0.6, 0.4}, {1.0, 3.0}};
  CHECK(psi_roots(bv, 0.1).size() == 3);  // sigma = 0: n + 1 roots
  // Z(0) = 1 pins the coefficient normalization
  ScaleFunction sf(kHyper, 0.1);
  CHECK(sf.z(0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stable family via Mittag-Leffler") {
  ScaleFunction sf(kStable, 1.0);
  CHECK(sf.w(1.0) == doctest::Approx(1.7232443570326095).epsilon(1e-12));
  // alpha = 2 coincides with a driftless Brownian of matched exponent
  LevyModel st2 = StableSpectralNeg{2.0, 1.0};
  LevyModel bm2 = BrownianDrift{0.0, std::sqrt(2.0)};
  ScaleFunction a(st2, 0.7), b(bm2, 0.7);
  for (double x : {0.5, 1.0, 3.0, 10.0})
    CHECK(a.w(x) == doctest::Approx(b.w(x)).epsilon(1e-10));
}

TEST_CASE("mittag-leffler values") {
  CHECK(mittag_leffler(2.0, 1.0, 0) ==
        doctest::Approx(std::cosh(1.0)).epsilon(1e-13));
  for (double y : {0.5, 4.0, 25.0, 60.0, 200.0})
    CHECK(mittag_leffler(2.0, y, 0) ==
          doctest::Approx(std::cosh(std::sqrt(y))).epsilon(1e-10));
  CHECK(mittag_leffler(1.7, 0.0, 0) == doctest::Approx(1.0));
  const double h = 1e-6;
  double fd = (mittag_leffler(1.5, 2.0 + h, 0) -
               mittag_leffler(1.5, 2.0 - h, 0)) /
              (2.0 * h);
  CHECK(std::abs(fd - mittag_leffler(1.5, 2.0, 1)) < 1e-6);
  // second derivative against a difference of first derivatives
  double fd2 = (mittag_leffler(1.5, 2.0 + h, 1) -
                mittag_leffler(1.5, 2.0 - h, 1)) /
               (2.0 * h);
  CHECK(std::abs(fd2 - mittag_leffler(1.5, 2.0, 2)) < 1e-5);
}

TEST_CASE("numeric inversion agrees with closed forms") {
  for (double q : {0.1, 1.0}) {
    ScaleFunction cl(kCl, q), bm(kBrownian, q);
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
      CHECK(std::abs(w_numeric(kCl, q, x) - cl.w(x)) <= 1e-6 * cl.w(x));
      CHECK(std::abs(w_numeric(kBrownian, q, x) - bm.w(x)) <=
            1e-6 * bm.w(x));
    }
  }
  ScaleFunction st(kStable, 1.0), he(kHyper, 0.1);
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(w_numeric(kStable, 1.0, x) - st.w(x)) <= 1e-5 * st.w(x));
    CHECK(std::abs(w_numeric(kHyper, 0.1, x) - he.w(x)) <= 1e-5 * he.w(x));
  }
}

TEST_CASE("numeric-inversion source restricts derivatives") {
  ScaleFunction sf(kCl, 0.1, ScaleSource::NumericInversion);
  CHECK_NOTHROW(sf.w_derivative(1.0, 1));
  CHECK_THROWS_AS(sf.w_derivative(1.0, 2), UnsupportedOperation);
}

TEST_CASE("laplace transform identity") {
  for (const auto& m : {kCl, kBrownian}) {
    double q = 0.1;
    double th = phi(m, q) + 1.0;
    double target = 1.0 / (psi(m, th) - q);
    ScaleFunction sf(m, q);
    double M = 10.0 * std::log(10.0);
    double got = adaptive_simpson(
        [&](double x) { return std::exp(-th * x) * sf.w(x); }, 0.0, M,
        1e-11 * target);
    CHECK(got == doctest::Approx(target).epsilon(1e-6));
  }
}

TEST_CASE("antiderivatives and ratio bounds") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.1, 6.0);
  for (const auto& m : kAll) {
    ScaleFunction sf(m, 0.1);
    for (int i = 0; i < 50; ++i) {
      double a = ua(rng);
      std::uniform_real_distribution<double> uy(0.0, a);
      double y = uy(rng);
      CHECK(sf.wbar(y) / sf.wbar(a) <= sf.w(y) / sf.w(a) + 1e-12);
    }
    for (double x : {0.5, 2.0}) {
      CHECK(std::abs(sf.z(x) - 1.0 - 0.1 * sf.wbar(x)) < 1e-12);
      double quad =
          adaptive_simpson([&](double u) { return sf.w(u); }, 0.0, x, 1e-10);
      CHECK(std::abs(sf.wbar(x) - quad) < 1e-8);
      double quad2 =
          adaptive_simpson([&](double u) { return sf.z(u); }, 0.0, x, 1e-10);
      CHECK(std::abs(sf.zbar(x) - quad2) < 1e-8);
    }
  }
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.05, 8.0);
  const double h = 1e-5;
  for (const auto& m : kAll) {
    ScaleFunction sf(m, 0.1);
    for (int i = 0; i < 100; ++i) {
      double x = ux(rng);
      double fd = (sf.w(x + h) - sf.w(x - h)) / (2.0 * h);
      CHECK(std::abs(fd - sf.w_derivative(x, 1)) <=
            1e-6 * std::abs(sf.w_derivative(x, 1)));
    }
    // higher orders, where defined, against differences of lower orders
    for (double x : {0.7, 2.3}) {
      double fd2 =
          (sf.w_derivative(x + h, 1) - sf.w_derivative(x - h, 1)) / (2.0 * h);
      CHECK(std::abs(fd2 - sf.w_derivative(x, 2)) <=
            1e-5 * std::max(1.0, std::abs(sf.w_derivative(x, 2))));
    }
  }
}

TEST_CASE("w is nonnegative and nondecreasing") {
  for (const auto& m : kAll) {
    ScaleFunction sf(m, 0.1);
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
      double w = sf.w(0.08 * i);
      CHECK(w >= prev - 1e-13);
      prev = w;
    }
  }
}
