#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "snlevy/levy_model.hpp"

namespace snlevy {

struct SimConfig {
  enum Scheme { EventDriven, EulerSkorokhod };
  long n_paths = 10000;
  double dt = 1e-3;       // EulerSkorokhod step
  double horizon = 100.0; // truncation time T
  std::uint64_t seed = 1;
  Scheme scheme = EventDriven;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n = 0;
  double truncation_bound = 0.0;
  bool within(double target, double k) const;
};

struct PathEvent {
  double time = 0.0;
  double pre_level = 0.0;
  double post_level = 0.0;
  double dL = 0.0;
  double dR = 0.0;
};

/// Event log of one controlled trajectory.
struct SimPath {
  std::vector<PathEvent> events;
  std::optional<double> ruin_time;
  double disc_L = 0.0;
  double disc_R = 0.0;
};

struct ReflectedEstimates {
  MCEstimate dividends;       // int_0^{sigma_a} e^{-qt} dL
  MCEstimate ruin_transform;  // e^{-q sigma_a}
};

struct DoublyReflectedEstimates {
  MCEstimate disc_L;
  MCEstimate disc_R;
};

enum class ExitEstimand {
  UpCrossFirst,          // e^{-qT} on up-crossing a before passing 0
  ReflectedInfEntrance,  // entrance of X - inf X into (a, inf)
  ReflectedSupEntrance,  // entrance of sup X - X into (a, inf)
  OvershootReflected,    // discounted position at that entrance
  OvershootRuin,         // discounted position at first passage below 0
};

/// Single-barrier strategy pi_a run to ruin (or horizon).
ReflectedEstimates simulate_reflected_barrier(const LevyModel& model, double a,
                                              double x, double q,
                                              const SimConfig& cfg);

/// Doubly reflected process on [0,a] run to the horizon; the alternating
/// regulation construction, exact for EventDriven.
DoublyReflectedEstimates simulate_doubly_reflected(
    const LevyModel& model, double a, double x, double q, const SimConfig& cfg,
    std::vector<SimPath>* dump = nullptr, std::size_t dump_cap = 0);

/// MC counterpart of one exit identity; x is the starting level.
MCEstimate simulate_exit_functionals(const LevyModel& model, double x, double a,
                                     double q, const SimConfig& cfg,
                                     ExitEstimand estimand);

/// One increment of the spectrally negative standard stable process over dt,
/// scaled so that E[e^{theta inc}] = exp(dt (scale*theta)^alpha).
double sample_stable_increment(double alpha, double scale, double dt,
                               std::mt19937_64& rng);

/// Fraction of (discretely sampled) time the doubly reflected process spends
/// in each of n_bins bins of [0,a]; EventDriven only.
std::vector<double> occupation_histogram(const LevyModel& model, double a,
                                         double x, double q,
                                         const SimConfig& cfg, int n_bins,
                                         double sample_dt);

}  // namespace snlevy
