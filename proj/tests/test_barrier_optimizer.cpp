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

TEST_CASE("classical barrier closed forms") {
  auto bm = optimal_classical_barrier(kBrownian, 0.1);
  CHECK(bm.level == doctest::Approx(2.8198308272299593).epsilon(1e-10));
  CHECK(bm.method == BarrierSolution::ClosedForm);
  // negative drift: pay out immediately
  CHECK(optimal_classical_barrier(LevyModel(BrownianDrift{-0.5, 1.0}), 0.1)
            .level == 0.0);
  auto cl = optimal_classical_barrier(kCl, 0.1);
  CHECK(cl.level == doctest::Approx(4.2140705627485138).epsilon(1e-10));
  // p lambda mu <= (q + lambda)^2 forces a zero barrier
  CHECK(optimal_classical_barrier(
            LevyModel(CramerLundbergExp{10.0, 1.0, 1.0}), 3.0)
            .level == 0.0);
  auto st = optimal_classical_barrier(kStable, 1.0);
  CHECK(st.level == doctest::Approx(0.3834070052987350).epsilon(1e-8));
}

TEST_CASE("zero-barrier dichotomy across the boundary") {
  // scan q for the desk parameters: the cutoff is at p lm mu = (q + lm)^2,
  // i.e. q = sqrt(2) - 1 here
  double cutoff = std::sqrt(2.0) - 1.0;
  for (int i = 0; i < 20; ++i) {
    double q = 0.05 + 0.05 * i;
    auto sol = optimal_classical_barrier(kCl, q);
    if (q >= cutoff)
      CHECK(sol.level == 0.0);
    else
      CHECK(sol.level > 0.0);
  }
}

TEST_CASE("W' is globally minimized at c*") {
  std::mt19937_64 rng(13);
  for (const auto& m : kAll)
    for (double q : {0.1, 1.0}) {
      double cs = optimal_classical_barrier(m, q).level;
      ScaleFunction sf(m, q);
      auto wp = [&](double a) {
        return a > 0.0 ? sf.w_derivative(a, 1) : w_zero_values(m, q).second;
      };
      double at = wp(cs > 0.0 ? cs : 0.0);
      std::uniform_real_distribution<double> ua(0.0, 4.0 * cs + 4.0);
      for (int i = 0; i < 200; ++i) CHECK(at <= wp(ua(rng)) + 1e-10);
      if (cs > 0.0) {
        double w2 = w_derivatives(m, q, cs, 2);
        double scale = std::abs(w_derivatives(m, q, cs + 1.0, 2));
        CHECK(std::abs(w2) <= 1e-8 * std::max(scale, 1.0));
      }
    }
}

TEST_CASE("Brownian barrier identity") {
  double cs = optimal_classical_barrier(kBrownian, 0.1).level;
  ScaleFunction sf(kBrownian, 0.1);
  CHECK(sf.w(cs) / sf.w_derivative(cs, 1) ==
        doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("bail-out barrier") {
  // small jump mass with sigma = 0: immediate-injection regime
  auto zero = optimal_bailout_barrier(kCl, 1.0, 1.5);
  CHECK(zero.level == 0.0);
  CHECK(zero.method == BarrierSolution::ZeroByCondition);
  REQUIRE(zero.reason.has_value());
  // any Gaussian part forces a positive barrier
  auto bm = optimal_bailout_barrier(kBrownian, 0.1, 1.5);
  CHECK(bm.level == doctest::Approx(1.2931924736702673).epsilon(1e-9));
  ScaleFunction sf(kBrownian, 0.1);
  CHECK(std::abs(bailout_criterion(sf, 1.5, bm.level)) <=
        1e-9 * std::abs(bailout_criterion(sf, 1.5, 1e-8)));
  // desk case: jump mass 1 > q/(phi-1) = 0.2, so d* > 0 despite sigma = 0
  auto cl = optimal_bailout_barrier(kCl, 0.1, 1.5);
  CHECK(cl.level > 0.0);
}

TEST_CASE("sign structure of the scaled criterion") {
  for (const auto& m : {kBrownian, kCl, kHyper}) {
    auto sol = optimal_bailout_barrier(m, 0.1, 1.5);
    if (sol.level <= 0.0) continue;
    ScaleFunction sf(m, 0.1);
    for (int i = 1; i <= 100; ++i) {
      double a = 3.0 * sol.level * i / 100.0;
      double f = bailout_criterion_f(sf, 1.5, a);
      if (a < sol.level * (1.0 - 1e-9)) CHECK(f > 0.0);
      if (a > sol.level * (1.0 + 1e-9)) CHECK(f <= 1e-12);
    }
  }
}

TEST_CASE("generator annihilates the value inside the barrier") {
  double cs = optimal_classical_barrier(kBrownian, 0.1).level;
  ValueFunctionDescriptor vc{ValueFunctionDescriptor::Classical, cs, 0.0};
  for (double x : {0.3 * cs, 0.7 * cs})
    CHECK(std::abs(generator_apply(kBrownian, 0.1, vc, x)) < 1e-7);
  CHECK(generator_apply(kBrownian, 0.1, vc, cs + 1.0) < 0.0);
  double cl_cs = optimal_classical_barrier(kCl, 0.1).level;
  ValueFunctionDescriptor vcl{ValueFunctionDescriptor::Classical, cl_cs, 0.0};
  CHECK(generator_apply(kCl, 0.1, vcl, cl_cs + 1.0) < 0.0);
  double ds = optimal_bailout_barrier(kCl, 0.1, 1.5).level;
  REQUIRE(ds > 0.0);
  ValueFunctionDescriptor vb{ValueFunctionDescriptor::Bailout, ds, 1.5};
  for (double x : {0.3 * ds, 0.7 * ds})
    CHECK(std::abs(generator_apply(kCl, 0.1, vb, x)) < 1e-7);
  CHECK_THROWS_AS(generator_apply(kStable, 0.1, vc, 0.5),
                  UnsupportedOperation);
}

TEST_CASE("variational inequality verification") {
  auto r1 = verify_hjb_classical(kCl, 0.1, 20.0, 200);
  CHECK(r1.condition_holds);
  CHECK(r1.interior_max_abs <= 1e-7 * r1.scale);
  auto r2 = verify_hjb_classical(kBrownian, 0.1, 20.0, 200);
  CHECK(r2.condition_holds);
  auto r3 = verify_hjb_bailout_interior(kBrownian, 0.1, 1.5, 200);
  CHECK(r3.condition_holds);
}

TEST_CASE("optimal bail-out barrier maximizes the value") {
  for (const auto& m : {kBrownian, kCl}) {
    double ds = optimal_bailout_barrier(m, 0.1, 1.5).level;
    ScaleFunction sf(m, 0.1);
    for (double x : {0.0, 0.5, 1.5}) {
      double best =
          bailout_barrier_value(sf, 1.5, std::max(ds, 1e-9), x).value;
      for (int i = 1; i <= 40; ++i) {
        double a = (2.0 * ds + 2.0) * i / 40.0;
        CHECK(bailout_barrier_value(sf, 1.5, a, x).value <= best + 1e-9);
      }
    }
  }
}
