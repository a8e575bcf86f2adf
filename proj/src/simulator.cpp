#include "snlevy/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "snlevy/errors.hpp"

namespace snlevy {

bool MCEstimate::within(double target, double k) const {
  return std::abs(mean - target) <= k * stderr_ + truncation_bound;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Path i owns an independent substream derived from (seed, i); results are
// therefore identical for any worker count.
std::mt19937_64 path_rng(std::uint64_t seed, long idx) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(0x5851f42d4c957f2dULL +
                                                      std::uint64_t(idx))));
}

double pairwise_sum(const std::vector<double>& v, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

MCEstimate reduce(const std::vector<double>& values, double trunc_bound) {
  MCEstimate e;
  e.n = long(values.size());
  e.truncation_bound = trunc_bound;
  if (values.empty()) return e;
  e.mean = pairwise_sum(values, 0, values.size()) / double(values.size());
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - e.mean;
    sq[i] = d * d;
  }
  if (values.size() > 1) {
    double var = pairwise_sum(sq, 0, sq.size()) / double(values.size() - 1);
    e.stderr_ = std::sqrt(var / double(values.size()));
  }
  return e;
}

// Runs fn(path_index, rng) for every path, sharded over threads; per-path
// outputs land in index order so the reduction is order-independent.
template <typename Fn>
void run_paths(long n_paths, std::uint64_t seed, Fn&& fn) {
  unsigned nt = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  if (n_paths < 1024) nt = 1;
  std::vector<std::thread> workers;
  auto work = [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      auto rng = path_rng(seed, i);
      fn(i, rng);
    }
  };
  long chunk = (n_paths + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    long b = t * chunk, e = std::min(n_paths, b + chunk);
    if (b >= e) break;
    workers.emplace_back(work, b, e);
  }
  for (auto& w : workers) w.join();
}

void warn_short_horizon(double q, double T) {
  if (q * T < 10.0)
    std::fprintf(stderr,
                 "snlevy: warning: horizon*q = %.3g < 10; truncation error "
                 "may dominate\n",
                 q * T);
}

// Bounded-variation event model: linear drift between claim epochs.
struct EventModel {
  double drift = 0.0;
  double lambda = 0.0;
  double mean_claim = 0.0;
  const CramerLundbergExp* cl = nullptr;
  const HyperExpJumpDiffusion* he = nullptr;

  double sample_claim(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double u = u01(rng);
    if (cl) return -std::log(1.0 - u01(rng)) / cl->mu_rate;
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 1 < he->weights.size(); ++i) {
      acc += he->weights[i];
      if (u <= acc) break;
    }
    return -std::log(1.0 - u01(rng)) / he->rates[i];
  }
};

EventModel make_event_model(const LevyModel& model) {
  auto vc = variation_class(model);
  if (!vc.bounded())
    throw ConfigError(
        "EventDriven scheme requires a bounded-variation model");
  EventModel em;
  em.drift = vc.drift;
  if (const auto* c = std::get_if<CramerLundbergExp>(&model)) {
    em.cl = c;
    em.lambda = c->lambda;
    em.mean_claim = 1.0 / c->mu_rate;
  } else {
    em.he = &std::get<HyperExpJumpDiffusion>(model);
    em.lambda = em.he->lambda;
    for (std::size_t i = 0; i < em.he->weights.size(); ++i)
      em.mean_claim += em.he->weights[i] / em.he->rates[i];
  }
  return em;
}

// Diffusive parameters for the Euler-Skorokhod scheme.
struct EulerModel {
  double mu = 0.0, sigma = 0.0, lambda = 0.0;
  const CramerLundbergExp* cl = nullptr;
  const HyperExpJumpDiffusion* he = nullptr;
  double mean_claim = 0.0;

  double sample_claim(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (cl) return -std::log(1.0 - u01(rng)) / cl->mu_rate;
    double u = u01(rng), acc = 0.0;
    std::size_t i = 0;
    for (; i + 1 < he->weights.size(); ++i) {
      acc += he->weights[i];
      if (u <= acc) break;
    }
    return -std::log(1.0 - u01(rng)) / he->rates[i];
  }
};

EulerModel make_euler_model(const LevyModel& model) {
  EulerModel em;
  if (const auto* b = std::get_if<BrownianDrift>(&model)) {
    em.mu = b->mu;
    em.sigma = b->sigma;
    return em;
  }
  if (const auto* c = std::get_if<CramerLundbergExp>(&model)) {
    em.mu = c->p;
    em.cl = c;
    em.lambda = c->lambda;
    em.mean_claim = 1.0 / c->mu_rate;
    return em;
  }
  if (const auto* h = std::get_if<HyperExpJumpDiffusion>(&model)) {
    em.mu = h->mu;
    em.sigma = h->sigma;
    em.he = h;
    em.lambda = h->lambda;
    for (std::size_t i = 0; i < h->weights.size(); ++i)
      em.mean_claim += h->weights[i] / h->rates[i];
    return em;
  }
  throw ConfigError(
      "EulerSkorokhod scheme does not support the stable family; its "
      "identities are validated through closed forms only");
}

struct PathOutcome {
  double disc_L = 0.0;
  double disc_R = 0.0;
  double ruin_disc = 0.0;    // e^{-q sigma_a}, 0 if truncated
  double ruin_level = 0.0;   // U_{sigma_a} < 0 at ruin
  std::optional<double> ruin_time;
};

// Exact single-barrier path: between claim epochs the level rises linearly,
// barrier intervals pay dividends at the drift rate in closed form, ruin is
// detected exactly at a claim.
PathOutcome ed_reflected_path(const EventModel& em, double a, double x,
                              double q, double T, std::mt19937_64& rng,
                              SimPath* log = nullptr) {
  PathOutcome out;
  std::exponential_distribution<double> exp_gap(em.lambda);
  double level = std::min(x, a);
  if (x > a) {
    out.disc_L += x - a;  // lump at t = 0+
    if (log) log->events.push_back({0.0, x, a, x - a, 0.0});
  }
  double t = 0.0;
  while (true) {
    double gap = exp_gap(rng);
    double t_next = t + gap;
    double t_hit = level < a ? t + (a - level) / em.drift : t;
    double t_end = std::min(t_next, T);
    if (t_hit < t_end)
      out.disc_L +=
          em.drift / q * (std::exp(-q * t_hit) - std::exp(-q * t_end));
    if (t_next >= T) return out;  // truncated: sigma_a beyond horizon
    double pre = std::min(a, level + em.drift * gap);
    double claim = em.sample_claim(rng);
    level = pre - claim;
    if (log) log->events.push_back({t_next, pre, std::max(level, 0.0), 0.0, 0.0});
    if (level < 0.0) {
      out.ruin_disc = std::exp(-q * t_next);
      out.ruin_level = level;
      out.ruin_time = t_next;
      return out;
    }
    t = t_next;
  }
}

// Exact doubly reflected path: injections happen only at claim instants.
PathOutcome ed_doubly_path(const EventModel& em, double a, double x, double q,
                           double T, std::mt19937_64& rng,
                           SimPath* log = nullptr) {
  PathOutcome out;
  std::exponential_distribution<double> exp_gap(em.lambda);
  double level = std::min(x, a);
  if (x > a) {
    out.disc_L += x - a;
    if (log) log->events.push_back({0.0, x, a, x - a, 0.0});
  }
  double t = 0.0;
  while (true) {
    double gap = exp_gap(rng);
    double t_next = t + gap;
    double t_hit = level < a ? t + (a - level) / em.drift : t;
    double t_end = std::min(t_next, T);
    if (t_hit < t_end)
      out.disc_L +=
          em.drift / q * (std::exp(-q * t_hit) - std::exp(-q * t_end));
    if (t_next >= T) return out;
    double pre = std::min(a, level + em.drift * gap);
    double claim = em.sample_claim(rng);
    level = pre - claim;
    double inject = 0.0;
    if (level < 0.0) {
      inject = -level;
      out.disc_R += inject * std::exp(-q * t_next);
      level = 0.0;
    }
    if (log) log->events.push_back({t_next, pre, level, 0.0, inject});
    t = t_next;
  }
}

PathOutcome euler_reflected_path(const EulerModel& em, double a, double x,
                                 double q, double T, double dt, bool doubly,
                                 std::mt19937_64& rng, SimPath* log = nullptr) {
  PathOutcome out;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::poisson_distribution<int> pois(em.lambda * dt);
  double level = std::min(x, a);
  if (x > a) {
    out.disc_L += x - a;
    if (log) log->events.push_back({0.0, x, a, x - a, 0.0});
  }
  double sq = em.sigma * std::sqrt(dt);
  long n_steps = long(std::ceil(T / dt));
  for (long s = 0; s < n_steps; ++s) {
    double t = s * dt;
    double disc = std::exp(-q * (t + 0.5 * dt));  // midpoint discount
    double dX = em.mu * dt + (em.sigma > 0.0 ? sq * gauss(rng) : 0.0);
    if (em.lambda > 0.0) {
      int k = pois(rng);
      for (int j = 0; j < k; ++j) dX -= em.sample_claim(rng);
    }
    double pre = level + dX;
    double dL = std::max(pre - a, 0.0);
    double v = pre - dL;
    if (dL > 0.0) out.disc_L += disc * dL;
    if (doubly) {
      double dR = std::max(-v, 0.0);
      if (dR > 0.0) out.disc_R += disc * dR;
      v += dR;
      if (log && (dL > 0.0 || dR > 0.0))
        log->events.push_back({t + dt, pre, v, dL, dR});
    } else if (v < 0.0) {
      out.ruin_disc = std::exp(-q * (t + dt));
      out.ruin_level = v;
      out.ruin_time = t + dt;
      return out;
    }
    level = v;
  }
  return out;
}

double dividend_unit_rate(const LevyModel& model, const SimConfig& cfg) {
  if (cfg.scheme == SimConfig::EventDriven)
    return variation_class(model).drift;
  auto em = make_euler_model(model);
  return std::max(em.mu, 0.0) + 2.0 * em.sigma;
}

}  // namespace

ReflectedEstimates simulate_reflected_barrier(const LevyModel& model, double a,
                                              double x, double q,
                                              const SimConfig& cfg) {
  if (x < 0.0 || a < 0.0)
    throw std::domain_error("simulate_reflected_barrier: need x, a >= 0");
  validate(model);
  warn_short_horizon(q, cfg.horizon);
  std::vector<double> divs(cfg.n_paths), ruin(cfg.n_paths);
  if (cfg.scheme == SimConfig::EventDriven) {
    auto em = make_event_model(model);
    run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
      auto out = ed_reflected_path(em, a, x, q, cfg.horizon, rng);
      divs[i] = out.disc_L;
      ruin[i] = out.ruin_disc;
    });
  } else {
    auto em = make_euler_model(model);
    run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
      auto out =
          euler_reflected_path(em, a, x, q, cfg.horizon, cfg.dt, false, rng);
      divs[i] = out.disc_L;
      ruin[i] = out.ruin_disc;
    });
  }
  double tail = std::exp(-q * cfg.horizon);
  double rate = dividend_unit_rate(model, cfg);
  ReflectedEstimates r;
  r.dividends = reduce(divs, tail * rate * (1.0 + 1.0 / q));
  r.ruin_transform = reduce(ruin, tail);
  return r;
}

DoublyReflectedEstimates simulate_doubly_reflected(
    const LevyModel& model, double a, double x, double q, const SimConfig& cfg,
    std::vector<SimPath>* dump, std::size_t dump_cap) {
  if (x < 0.0 || !(a > 0.0))
    throw std::domain_error("simulate_doubly_reflected: need x >= 0, a > 0");
  validate(model);
  warn_short_horizon(q, cfg.horizon);
  std::vector<double> l_vals(cfg.n_paths), r_vals(cfg.n_paths);
  if (dump) dump->resize(std::min<std::size_t>(dump_cap, cfg.n_paths));
  double mean_claim = 0.0, lambda = 0.0, sigma = gaussian_coefficient(model);
  auto record = [&](long i) -> SimPath* {
    return (dump && std::size_t(i) < dump->size()) ? &(*dump)[i] : nullptr;
  };
  if (cfg.scheme == SimConfig::EventDriven) {
    auto em = make_event_model(model);
    mean_claim = em.mean_claim;
    lambda = em.lambda;
    run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
      SimPath* log = record(i);
      auto out = ed_doubly_path(em, a, x, q, cfg.horizon, rng, log);
      l_vals[i] = out.disc_L;
      r_vals[i] = out.disc_R;
      if (log) {
        log->disc_L = out.disc_L;
        log->disc_R = out.disc_R;
        log->ruin_time = out.ruin_time;
      }
    });
  } else {
    auto em = make_euler_model(model);
    mean_claim = em.mean_claim;
    lambda = em.lambda;
    run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
      SimPath* log = record(i);
      auto out = euler_reflected_path(em, a, x, q, cfg.horizon, cfg.dt, true,
                                      rng, log);
      l_vals[i] = out.disc_L;
      r_vals[i] = out.disc_R;
      if (log) {
        log->disc_L = out.disc_L;
        log->disc_R = out.disc_R;
      }
    });
  }
  double tail = std::exp(-q * cfg.horizon);
  DoublyReflectedEstimates est;
  est.disc_L = reduce(
      l_vals, tail * dividend_unit_rate(model, cfg) * (1.0 + 1.0 / q));
  est.disc_R =
      reduce(r_vals, tail * (lambda * mean_claim + 2.0 * sigma) * (1.0 + 1.0 / q));
  return est;
}

namespace {

// Free or singly reflected path functionals behind the exit identities.
double ed_exit_value(const EventModel& em, double start, double a, double q,
                     double T, ExitEstimand kind, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp_gap(em.lambda);
  double level = start;
  double t = 0.0;
  switch (kind) {
    case ExitEstimand::UpCrossFirst: {
      // free path until exit of [0,a]; upward exit is continuous
      while (t < T) {
        double gap = exp_gap(rng);
        double t_hit = t + (a - level) / em.drift;
        if (t_hit <= t + gap) return t_hit <= T ? std::exp(-q * t_hit) : 0.0;
        level += em.drift * gap;
        level -= em.sample_claim(rng);
        t += gap;
        if (level < 0.0) return 0.0;  // down-exit first
      }
      return 0.0;
    }
    case ExitEstimand::ReflectedInfEntrance: {
      // Y = X - I: claims clipped at 0, entrance into (a, inf) is continuous
      while (t < T) {
        double gap = exp_gap(rng);
        double t_hit = t + (a - level) / em.drift;
        if (t_hit <= t + gap) return t_hit <= T ? std::exp(-q * t_hit) : 0.0;
        level = std::max(0.0, level + em.drift * gap - em.sample_claim(rng));
        t += gap;
      }
      return 0.0;
    }
    case ExitEstimand::ReflectedSupEntrance: {
      // Yhat = S - X with Yhat_0 = start is U^a with U_0 = a - start
      auto out = ed_reflected_path(em, a, a - start, q, T, rng);
      return out.ruin_disc;
    }
    case ExitEstimand::OvershootReflected: {
      // overshoot transform takes the surplus coordinate: U_0 = start
      auto out = ed_reflected_path(em, a, start, q, T, rng);
      return out.ruin_disc * out.ruin_level;
    }
    case ExitEstimand::OvershootRuin: {
      // free path from start until first passage below 0
      while (t < T) {
        double gap = exp_gap(rng);
        level += em.drift * gap;
        level -= em.sample_claim(rng);
        t += gap;
        if (level < 0.0) return t <= T ? std::exp(-q * t) * level : 0.0;
      }
      return 0.0;
    }
  }
  return 0.0;
}

double euler_exit_value(const EulerModel& em, double start, double a, double q,
                        double T, double dt, ExitEstimand kind,
                        std::mt19937_64& rng) {
  if (kind == ExitEstimand::ReflectedSupEntrance ||
      kind == ExitEstimand::OvershootReflected) {
    bool sup = kind == ExitEstimand::ReflectedSupEntrance;
    auto out =
        euler_reflected_path(em, a, sup ? a - start : start, q, T, dt, false, rng);
    return sup ? out.ruin_disc : out.ruin_disc * out.ruin_level;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::poisson_distribution<int> pois(em.lambda * dt);
  double level = start;
  double sq = em.sigma * std::sqrt(dt);
  long n_steps = long(std::ceil(T / dt));
  for (long s = 0; s < n_steps; ++s) {
    double dX = em.mu * dt + (em.sigma > 0.0 ? sq * gauss(rng) : 0.0);
    if (em.lambda > 0.0) {
      int k = pois(rng);
      for (int j = 0; j < k; ++j) dX -= em.sample_claim(rng);
    }
    level += dX;
    double t_post = (s + 1) * dt;
    switch (kind) {
      case ExitEstimand::UpCrossFirst:
        if (level >= a) return std::exp(-q * t_post);
        if (level < 0.0) return 0.0;
        break;
      case ExitEstimand::ReflectedInfEntrance:
        if (level >= a) return std::exp(-q * t_post);
        level = std::max(level, 0.0);
        break;
      case ExitEstimand::OvershootRuin:
        if (level < 0.0) return std::exp(-q * t_post) * level;
        break;
      default:
        break;
    }
  }
  return 0.0;
}

}  // namespace

MCEstimate simulate_exit_functionals(const LevyModel& model, double x, double a,
                                     double q, const SimConfig& cfg,
                                     ExitEstimand estimand) {
  validate(model);
  bool needs_barrier = estimand != ExitEstimand::OvershootRuin;
  if (needs_barrier && (x < 0.0 || x > a))
    throw std::domain_error("simulate_exit_functionals: x must lie in [0,a]");
  if (!needs_barrier && x < 0.0)
    throw std::domain_error("simulate_exit_functionals: x must be >= 0");
  warn_short_horizon(q, cfg.horizon);
  std::vector<double> vals(cfg.n_paths);
  double mean_claim = 0.0;
  if (cfg.scheme == SimConfig::EventDriven) {
    auto em = make_event_model(model);
    mean_claim = em.mean_claim;
    run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
      vals[i] = ed_exit_value(em, x, a, q, cfg.horizon, estimand, rng);
    });
  } else {
    auto em = make_euler_model(model);
    mean_claim = em.mean_claim;
    run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
      vals[i] =
          euler_exit_value(em, x, a, q, cfg.horizon, cfg.dt, estimand, rng);
    });
  }
  double tail = std::exp(-q * cfg.horizon);
  bool overshoot = estimand == ExitEstimand::OvershootReflected ||
                   estimand == ExitEstimand::OvershootRuin;
  return reduce(vals, overshoot ? tail * (a + x + mean_claim + 1.0) : tail);
}

double sample_stable_increment(double alpha, double scale, double dt,
                               std::mt19937_64& rng) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw std::domain_error("sample_stable_increment: alpha in (1,2]");
  std::uniform_real_distribution<double> unif(-M_PI / 2.0, M_PI / 2.0);
  std::exponential_distribution<double> expo(1.0);
  double u = unif(rng);
  double w = expo(rng);
  // Chambers-Mallows-Stuck for the totally right-skewed standard variate;
  // the spectrally negative increment is its negative, scaled so that
  // E[exp(theta inc)] = exp(dt theta^alpha) before the model scale.
  double ta = std::tan(M_PI * alpha / 2.0);
  double b = std::atan(ta) / alpha;
  double s = std::pow(1.0 + ta * ta, 0.5 / alpha);
  double v = s * std::sin(alpha * (u + b)) /
             std::pow(std::cos(u), 1.0 / alpha) *
             std::pow(std::cos(u - alpha * (u + b)) / w, (1.0 - alpha) / alpha);
  double unit_scale = std::pow(dt * std::abs(std::cos(M_PI * alpha / 2.0)),
                               1.0 / alpha);
  if (alpha == 2.0) unit_scale = std::sqrt(dt);
  return -scale * unit_scale * v;
}

std::vector<double> occupation_histogram(const LevyModel& model, double a,
                                         double x, double q,
                                         const SimConfig& cfg, int n_bins,
                                         double sample_dt) {
  auto em = make_event_model(model);
  std::vector<std::vector<double>> per_path(cfg.n_paths);
  run_paths(cfg.n_paths, cfg.seed, [&](long i, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp_gap(em.lambda);
    std::vector<double> counts(n_bins, 0.0);
    double level = std::min(x, a);
    double t = 0.0, next_sample = 0.0;
    while (t < cfg.horizon) {
      double gap = exp_gap(rng);
      double t_next = std::min(t + gap, cfg.horizon);
      while (next_sample < t_next) {
        double lv = std::min(a, level + em.drift * (next_sample - t));
        int b = std::min(n_bins - 1, int(lv / a * n_bins));
        // discount weighting makes the normalized histogram comparable to
        // the q-potential measure, not the stationary law
        counts[b] += std::exp(-q * next_sample);
        next_sample += sample_dt;
      }
      if (t + gap >= cfg.horizon) break;
      level = std::min(a, level + em.drift * gap);
      level = std::max(0.0, level - em.sample_claim(rng));
      t += gap;
    }
    per_path[i] = std::move(counts);
  });
  std::vector<double> total(n_bins, 0.0);
  double grand = 0.0;
  for (auto& c : per_path)
    for (int b = 0; b < n_bins; ++b) total[b] += c[b];
  for (double v : total) grand += v;
  for (double& v : total) v /= grand;
  return total;
}

}  // namespace snlevy
