#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snlevy/errors.hpp"
#include "snlevy/exit_identities.hpp"
#include "snlevy/policy_values.hpp"
#include "snlevy/simulator.hpp"

using namespace snlevy;

namespace {
const LevyModel kBrownian = BrownianDrift{1.0, 1.0};
const LevyModel kCl = CramerLundbergExp{2.0, 1.0, 1.0};
const LevyModel kStable = StableSpectralNeg{1.5, 1.0};

SimConfig event_cfg(long paths, double horizon = 100.0) {
  SimConfig cfg;
  cfg.n_paths = paths;
  cfg.horizon = horizon;
  cfg.scheme = SimConfig::EventDriven;
  cfg.seed = 42;
  return cfg;
}
}  // namespace

TEST_CASE("degenerate exit estimands") {
  auto cfg = event_cfg(200);
  // starting at the upper level: up-crossing is immediate and certain
  auto up = simulate_exit_functionals(kCl, 2.0, 2.0, 0.1, cfg,
                                      ExitEstimand::UpCrossFirst);
  CHECK(up.mean == doctest::Approx(1.0));
  CHECK(up.stderr_ == doctest::Approx(0.0));
}

TEST_CASE("lump dividend above the barrier") {
  // starting above the barrier pays (x - a) immediately; the remaining
  // trajectory from a is identical path-by-path for a common seed
  auto cfg = event_cfg(2000);
  auto hi = simulate_reflected_barrier(kCl, 2.0, 2.5, 0.1, cfg);
  auto at = simulate_reflected_barrier(kCl, 2.0, 2.0, 0.1, cfg);
  CHECK(hi.dividends.mean - at.dividends.mean == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero-barrier strategy, bounded variation") {
  // with a = 0 the whole drift is paid until the first claim; the value is
  // p / (q + lambda), here 2 / 1.1
  auto cfg = event_cfg(20000);
  auto est = simulate_reflected_barrier(kCl, 0.0, 0.0, 0.1, cfg);
  CHECK(est.dividends.within(2.0 / 1.1, 3.0));
}

TEST_CASE("reflected barrier matches the analytic value") {
  ScaleFunction sf(kCl, 0.1);
  double target = sf.w(1.0) / sf.w_derivative(2.0, 1);
  auto est = simulate_reflected_barrier(kCl, 2.0, 1.0, 0.1, event_cfg(40000));
  CHECK(est.dividends.within(target, 3.5));
}

TEST_CASE("doubly reflected matches the analytic components") {
  ScaleFunction sf(kCl, 0.1);
  auto cfg = event_cfg(30000, 150.0);
  auto est = simulate_doubly_reflected(kCl, 2.0, 1.0, 0.1, cfg);
  CHECK(est.disc_L.within(dividends_doubly(sf, 2.0, 1.0), 3.5));
  CHECK(est.disc_R.within(injections_doubly(sf, 2.0, 1.0), 3.5));
}

TEST_CASE("exit estimands match the transforms") {
  auto cfg = event_cfg(20000);
  double q = 0.1, a = 2.0;
  CHECK(simulate_exit_functionals(kCl, 1.0, a, q, cfg,
                                  ExitEstimand::UpCrossFirst)
            .within(exit_up_transform(kCl, q, 1.0, a), 3.5));
  CHECK(simulate_exit_functionals(kCl, 0.5, a, q, cfg,
                                  ExitEstimand::ReflectedInfEntrance)
            .within(reflected_at_infimum_entrance(kCl, q, 0.5, a), 3.5));
  CHECK(simulate_exit_functionals(kCl, 1.0, a, q, cfg,
                                  ExitEstimand::ReflectedSupEntrance)
            .within(reflected_at_supremum_entrance(kCl, q, 1.0, a), 3.5));
  CHECK(simulate_exit_functionals(kCl, 1.0, a, q, cfg,
                                  ExitEstimand::OvershootReflected)
            .within(overshoot_reflected(kCl, q, 1.0, a), 3.5));
  CHECK(simulate_exit_functionals(kCl, 1.0, a, q, cfg,
                                  ExitEstimand::OvershootRuin)
            .within(overshoot_ruin(kCl, q, 1.0), 3.5));
}

TEST_CASE("euler scheme agrees for the Brownian model") {
  SimConfig cfg;
  cfg.n_paths = 4000;
  cfg.dt = 1e-3;
  cfg.horizon = 60.0;
  cfg.seed = 7;
  cfg.scheme = SimConfig::EulerSkorokhod;
  ScaleFunction sf(kBrownian, 0.1);
  double target = sf.w(1.0) / sf.w_derivative(2.0, 1);
  auto est = simulate_reflected_barrier(kBrownian, 2.0, 1.0, 0.1, cfg);
  // discretization bias on top of MC noise: allow a combined band
  CHECK(std::abs(est.dividends.mean - target) <
        4.0 * est.dividends.stderr_ + est.dividends.truncation_bound + 0.05 * target);
}

TEST_CASE("bit-identical reproducibility") {
  auto cfg = event_cfg(20000);
  auto a = simulate_reflected_barrier(kCl, 2.0, 1.0, 0.1, cfg);
  auto b = simulate_reflected_barrier(kCl, 2.0, 1.0, 0.1, cfg);
  CHECK(a.dividends.mean == b.dividends.mean);
  CHECK(a.dividends.stderr_ == b.dividends.stderr_);
  CHECK(a.ruin_transform.mean == b.ruin_transform.mean);
}

TEST_CASE("stable increment sampler moments") {
  std::mt19937_64 rng(101);
  const double dt = 0.01, alpha = 1.5;
  // alpha = 2: gaussian with variance 2 dt
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double v = sample_stable_increment(2.0, 1.0, dt, rng);
    s += v;
    s2 += v * v;
  }
  double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(var / n));
  CHECK(var == doctest::Approx(2.0 * dt).epsilon(0.02));
  // spectrally negative: exponential moments exist,
  // E[e^{theta inc}] = exp(dt theta^alpha)
  double th = 0.5;
  double se = 0.0, se2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = std::exp(th * sample_stable_increment(alpha, 1.0, dt, rng));
    se += v;
    se2 += v * v;
  }
  double m = se / n;
  double sd = std::sqrt((se2 / n - m * m) / n);
  CHECK(std::abs(m - std::exp(dt * std::pow(th, alpha))) < 4.0 * sd);
  // negative skew: deep negative draws occur, large positive ones do not
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 50000; ++i) {
    double v = sample_stable_increment(alpha, 1.0, dt, rng);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo < -hi);
}

TEST_CASE("scheme and model compatibility") {
  SimConfig ev = event_cfg(10);
  CHECK_THROWS_AS(simulate_reflected_barrier(kBrownian, 2.0, 1.0, 0.1, ev),
                  ConfigError);
  SimConfig eu;
  eu.scheme = SimConfig::EulerSkorokhod;
  eu.n_paths = 10;
  CHECK_THROWS_AS(simulate_reflected_barrier(kStable, 2.0, 1.0, 0.1, eu),
                  ConfigError);
  CHECK_THROWS_AS(
      simulate_exit_functionals(kCl, 3.0, 2.0, 0.1, ev,
                                ExitEstimand::UpCrossFirst),
      std::domain_error);
}

TEST_CASE("path dumps satisfy the box constraint") {
  std::vector<SimPath> paths;
  auto cfg = event_cfg(300, 30.0);
  simulate_doubly_reflected(kCl, 2.0, 1.0, 0.1, cfg, &paths, 200);
  CHECK(paths.size() == 200);
  for (const auto& p : paths) {
    CHECK_FALSE(p.ruin_time.has_value());
    for (const auto& e : p.events) {
      CHECK(e.post_level >= -1e-12);
      CHECK(e.post_level <= 2.0 + 1e-12);
      CHECK(e.dL >= 0.0);
      CHECK(e.dR >= 0.0);
      // regulators act only at the respective boundary
      if (e.dL > 0.0 && e.time > 0.0) CHECK(e.post_level == doctest::Approx(2.0));
      if (e.dR > 0.0) CHECK(e.post_level == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("occupation histogram sanity") {
  auto cfg = event_cfg(1500, 120.0);
  auto h = occupation_histogram(kCl, 2.0, 1.0, 0.1, cfg, 10, 0.05);
  REQUIRE(h.size() == 10);
  double total = std::accumulate(h.begin(), h.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // the barrier is sticky for this drift-dominated model: heaviest bin on top
  CHECK(h.back() == *std::max_element(h.begin(), h.end()));
}
