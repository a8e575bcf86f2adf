#pragma once

#include <optional>
#include <string>

#include "snlevy/scale_functions.hpp"

namespace snlevy {

struct PolicyValueReport {
  double x = 0.0;
  double a = 0.0;
  double value = 0.0;
  std::optional<double> dividends;
  std::optional<double> injections_cost;  // undiscounted-by-phi expectation
  std::optional<std::string> note;
};

/// Value of the classical barrier strategy pi_a.
/// a = 0 uses W'(0+); if that is infinite (unbounded variation, no Gaussian
/// part) the limit value is x (immediate payout).
double classical_barrier_value(const LevyModel& model, double q, double a,
                               double x);

/// Expected discounted dividends under the double barrier pi_{0,a}.
double dividends_doubly(const LevyModel& model, double q, double a, double x);

/// Expected discounted injections under pi_{0,a}.
double injections_doubly(const LevyModel& model, double q, double a, double x);

/// Bail-out value with proportional injection cost phi > 1;
/// value = dividends - phi * injections, componentwise exact.
PolicyValueReport bailout_barrier_value(const LevyModel& model, double q,
                                        double phi_cost, double a, double x);

// ScaleFunction-based variants for hot paths.
double classical_barrier_value(const ScaleFunction& sf, double a, double x);
double dividends_doubly(const ScaleFunction& sf, double a, double x);
double injections_doubly(const ScaleFunction& sf, double a, double x);
PolicyValueReport bailout_barrier_value(const ScaleFunction& sf,
                                        double phi_cost, double a, double x);

}  // namespace snlevy
