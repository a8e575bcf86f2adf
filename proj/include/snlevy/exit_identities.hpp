#pragma once

#include <functional>

#include "snlevy/scale_functions.hpp"

namespace snlevy {

/// q-potential measure of the doubly reflected process on [0,a]: an atom at
/// zero (positive only for bounded variation) plus a density on (0,a].
/// Total mass is 1/q.
struct PotentialDensity {
  double a = 0.0;
  double x = 0.0;
  double atom_at_zero = 0.0;
  std::function<double(double)> density;
};

/// E_y[e^{-q T_{0,a}}; up-crossing first] = W(y)/W(a).
double exit_up_transform(const LevyModel& model, double q, double y, double a);

/// E_y[e^{-q tau_a}] = Z(y)/Z(a) for X reflected at its infimum.
double reflected_at_infimum_entrance(const LevyModel& model, double q, double y,
                                     double a);

/// E_{-y}[e^{-q tauhat_a}] = Z(a-y) - q W(a-y) W(a)/W'(a).
double reflected_at_supremum_entrance(const LevyModel& model, double q,
                                      double y, double a);

/// E_{y-a}[e^{-q tauhat_a} (a - Yhat_{tauhat_a})].
double overshoot_reflected(const LevyModel& model, double q, double y,
                           double a);

/// E_x[e^{-q T_0^-} X_{T_0^-}].
double overshoot_ruin(const LevyModel& model, double q, double x);

/// Potential density of the doubly reflected process.
PotentialDensity doubly_reflected_potential(const LevyModel& model, double q,
                                            double a, double x);

// Same identities, evaluated through a prebuilt ScaleFunction (hot paths).
double exit_up_transform(const ScaleFunction& sf, double y, double a);
double reflected_at_infimum_entrance(const ScaleFunction& sf, double y,
                                     double a);
double reflected_at_supremum_entrance(const ScaleFunction& sf, double y,
                                      double a);
double overshoot_reflected(const ScaleFunction& sf, double y, double a);
double overshoot_ruin(const ScaleFunction& sf, double x);

}  // namespace snlevy
