#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snlevy/scale_functions.hpp"

namespace snlevy {

struct BarrierSolution {
  enum Method { ClosedForm, GenericMinimize, GenericRootFind, ZeroByCondition };
  double level = 0.0;
  double criterion_residual = 0.0;
  Method method = ClosedForm;
  std::optional<std::string> reason;
};

struct HjbReport {
  std::vector<double> grid;
  std::vector<double> residuals;  // (Gamma v - q v)(x) per grid point
  double max_violation = 0.0;     // max positive residual beyond the barrier
  double interior_max_abs = 0.0;  // max |residual| inside (0, barrier)
  double scale = 1.0;
  bool condition_holds = false;
  double barrier = 0.0;
};

/// Analytic value function handed to the generator: classical v_a (zero
/// below 0) or bail-out v_bar_a (slope phi below 0).
struct ValueFunctionDescriptor {
  enum Kind { Classical, Bailout };
  Kind kind = Classical;
  double barrier = 0.0;
  double phi_cost = 0.0;  // Bailout only
};

/// c*, the global minimizer of W^(q)'. Closed form per family with a
/// generic golden-section minimization always run as a cross-check; the two
/// must agree to 1e-6 relative or a NumericFailure is thrown.
BarrierSolution optimal_classical_barrier(const LevyModel& model, double q);

/// d*, the first root of G(a) = [phi Z(a)-1] W'(a) - phi q W(a)^2,
/// or 0 when nu(-inf,0) <= q/(phi-1) and sigma = 0.
BarrierSolution optimal_bailout_barrier(const LevyModel& model, double q,
                                        double phi_cost);

/// The root criterion G(a) above, evaluated directly.
double bailout_criterion(const ScaleFunction& sf, double phi_cost, double a);

/// F(a) = [phi H(a) - 1] W'(a) / (q W(a)^2), sign-equivalent to G.
double bailout_criterion_f(const ScaleFunction& sf, double phi_cost, double a);

/// (Gamma f - q f)(x) for one of the artifact's analytic value functions.
/// Unsupported for the stable family (infinite-activity quadrature).
double generator_apply(const LevyModel& model, double q,
                       const ValueFunctionDescriptor& f, double x);

/// HJB sufficiency check: residual grid over (0, c*) and (c*, x_max].
HjbReport verify_hjb_classical(const LevyModel& model, double q, double x_max,
                               int n_grid);

/// Interior residual grid for the bail-out value v_bar_{d*} over (0, d*).
HjbReport verify_hjb_bailout_interior(const LevyModel& model, double q,
                                      double phi_cost, int n_grid);

}  // namespace snlevy
