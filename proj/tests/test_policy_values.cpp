#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "snlevy/barrier_optimizer.hpp"
#include "snlevy/errors.hpp"
#include "snlevy/policy_values.hpp"

using namespace snlevy;

namespace {
const LevyModel kBrownian = BrownianDrift{1.0, 1.0};
const LevyModel kCl = CramerLundbergExp{2.0, 1.0, 1.0};
const LevyModel kStable = StableSpectralNeg{1.5, 1.0};
const LevyModel kHyper =
    HyperExpJumpDiffusion{1.0, 0.5, 1.5, {0.6, 0.4}, {1.0, 3.0}};
const LevyModel kAll[] = {kBrownian, kCl, kStable, kHyper};
}  // namespace

TEST_CASE("classical barrier value") {
  ScaleFunction sf(kCl, 0.1);
  // the two branches meet continuously at x = a
  CHECK(classical_barrier_value(sf, 2.0, 2.0) ==
        doctest::Approx(sf.w(2.0) / sf.w_derivative(2.0, 1)));
  CHECK(classical_barrier_value(sf, 2.0, 1.0) ==
        doctest::Approx(4.5432556760633430).epsilon(1e-12));
  CHECK(classical_barrier_value(sf, 2.0, 3.0) ==
        doctest::Approx(1.0 + classical_barrier_value(sf, 2.0, 2.0)));
  // zero barrier, bounded variation: perpetuity of the drift until ruin
  CHECK(classical_barrier_value(kCl, 0.1, 0.0, 0.0) ==
        doctest::Approx(2.0 / 1.1).epsilon(1e-13));
  // zero barrier, unbounded variation without Gaussian part: limit is x
  CHECK(classical_barrier_value(kStable, 0.1, 0.0, 1.5) ==
        doctest::Approx(1.5));
  // Brownian at x = 0 with the optimal barrier: W(0) = 0
  double cs = optimal_classical_barrier(kBrownian, 0.1).level;
  CHECK(classical_barrier_value(kBrownian, 0.1, cs, 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("doubly reflected components") {
  ScaleFunction sf(kCl, 0.1);
  CHECK(dividends_doubly(sf, 2.0, 0.0) ==
        doctest::Approx(1.0 / (0.1 * sf.w(2.0))).epsilon(1e-13));
  CHECK(dividends_doubly(sf, 2.0, 1.0) ==
        doctest::Approx(11.6337095419924461).epsilon(1e-12));
  CHECK(injections_doubly(sf, 2.0, 1.0) ==
        doctest::Approx(2.2915260588847895).epsilon(1e-12));
  for (const auto& m : kAll) {
    ScaleFunction s(m, 0.1);
    for (double x : {0.0, 0.5, 1.7})
      CHECK(injections_doubly(s, 2.0, x) >= 0.0);
  }
  CHECK_THROWS_AS(dividends_doubly(sf, 2.0, 2.5), std::domain_error);
  CHECK_THROWS_AS(dividends_doubly(sf, 0.0, 0.0), std::domain_error);
}

TEST_CASE("bail-out value and components") {
  ScaleFunction sf(kCl, 0.1);
  for (double a : {0.8, 2.0})
    for (double x : {0.0, 0.4, a, a + 1.3}) {
      auto r = bailout_barrier_value(sf, 1.5, a, x);
      REQUIRE(r.dividends.has_value());
      REQUIRE(r.injections_cost.has_value());
      CHECK(r.value ==
            doctest::Approx(*r.dividends - 1.5 * *r.injections_cost)
                .epsilon(1e-14));
      CHECK(*r.dividends >= 0.0);
      CHECK(*r.injections_cost >= 0.0);
    }
  // hand-evaluated zero-barrier case
  CHECK(bailout_barrier_value(kCl, 0.1, 1.5, 0.0, 0.0).value ==
        doctest::Approx(5.0).epsilon(1e-13));
  // linear branch above the barrier
  auto v1 = bailout_barrier_value(sf, 1.5, 2.0, 2.5).value;
  auto v2 = bailout_barrier_value(sf, 1.5, 2.0, 4.0).value;
  CHECK(v2 - v1 == doctest::Approx(1.5).epsilon(1e-13));
  CHECK_THROWS_AS(bailout_barrier_value(kCl, 0.1, 1.0, 2.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(bailout_barrier_value(kStable, 0.1, 1.5, 0.0, 1.0),
                  UnsupportedOperation);
}

TEST_CASE("value slopes around the optimal bail-out barrier") {
  const double phi = 1.5, h = 1e-4;
  for (const auto& m : kAll) {
    double ds = optimal_bailout_barrier(m, 0.1, phi).level;
    if (ds <= 4.0 * h) continue;
    ScaleFunction sf(m, 0.1);
    for (int i = 1; i < 20; ++i) {
      double x = ds * i / 20.0;
      double d = (bailout_barrier_value(sf, phi, ds, x + h).value -
                  bailout_barrier_value(sf, phi, ds, x - h).value) /
                 (2.0 * h);
      CHECK(d >= 1.0 - 1e-6);
      CHECK(d <= phi + 1e-6);
    }
    double dm = (bailout_barrier_value(sf, phi, ds, ds - h).value -
                 bailout_barrier_value(sf, phi, ds, ds - 3.0 * h).value) /
                (2.0 * h);
    CHECK(dm == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("bail-out value is concave in x") {
  const double phi = 1.5;
  for (const auto& m : kAll) {
    double ds = optimal_bailout_barrier(m, 0.1, phi).level;
    if (ds <= 0.0) continue;
    ScaleFunction sf(m, 0.1);
    double h = ds / 30.0;
    for (int i = 1; i < 29; ++i) {
      double x = i * h;
      double sd = bailout_barrier_value(sf, phi, ds, x + h).value -
                  2.0 * bailout_barrier_value(sf, phi, ds, x).value +
                  bailout_barrier_value(sf, phi, ds, x - h).value;
      CHECK(sd <= 1e-10);
    }
  }
}

TEST_CASE("optimal barriers dominate") {
  std::mt19937_64 rng(9);
  for (const auto& m : kAll) {
    double cs = optimal_classical_barrier(m, 0.1).level;
    ScaleFunction sf(m, 0.1);
    bool bv = variation_class(m).bounded();
    std::uniform_real_distribution<double> ua(bv ? 0.0 : 1e-6,
                                              3.0 * cs + 2.0);
    for (int i = 0; i < 50; ++i) {
      double a = ua(rng);
      std::uniform_real_distribution<double> ux(0.0, std::max(cs, 0.5));
      double x = std::min(ux(rng), cs);
      CHECK(classical_barrier_value(sf, a, x) <=
            classical_barrier_value(sf, cs, x) + 1e-10);
    }
    double ds = optimal_bailout_barrier(m, 0.1, 1.5).level;
    std::uniform_real_distribution<double> ub(bv ? 0.0 : 1e-3,
                                              2.0 * ds + 3.0);
    for (int i = 0; i < 50; ++i) {
      double a = ub(rng);
      double x = ub(rng);
      CHECK(bailout_barrier_value(sf, 1.5, a, x).value <=
            bailout_barrier_value(sf, 1.5, ds, x).value + 1e-10);
    }
  }
}

TEST_CASE("value decreases past the optimal bail-out barrier") {
  for (const auto& m : kAll) {
    double ds = optimal_bailout_barrier(m, 0.1, 1.5).level;
    ScaleFunction sf(m, 0.1);
    double x = std::max(0.5 * ds, 0.25);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 15; ++i) {
      double a = std::max(ds, 1e-3) * (1.0 + 0.3 * i);
      double v = bailout_barrier_value(sf, 1.5, a, std::min(x, a)).value;
      CHECK(v <= prev + 1e-10);
      prev = v;
    }
  }
}
