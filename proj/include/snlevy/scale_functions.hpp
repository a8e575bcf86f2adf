#pragma once

#include <optional>
#include <vector>

#include "snlevy/levy_model.hpp"

namespace snlevy {

enum class ScaleSource { ClosedForm, NumericInversion };

/// Bundled scale-function values at one point.
struct ScaleEval {
  double x = 0.0;
  double q = 0.0;
  double w = 0.0;        // W^(q)(x)
  double w_prime = 0.0;  // W^(q)'(x)
  double z = 1.0;        // Z^(q)(x) = 1 + q Wbar
  double wbar = 0.0;     // antiderivative of W^(q)
  double zbar = 0.0;     // antiderivative of Z^(q)
  ScaleSource source = ScaleSource::ClosedForm;
};

struct InversionConfig {
  int node_count = 64;
  double work_precision_target = 1e-9;
};

/// Exponential mixture sum c_i e^{r_i x}: the shared closed form of W^(q)
/// for the three rational-psi families (coefficients are the residues
/// 1/psi'(theta_i) at the roots theta_i of psi = q).
struct ExpMixture {
  std::vector<double> coef, rate;
  double eval(double x) const;
  double derivative(double x, int order) const;
  double antiderivative(double x) const;         // int_0^x
  double antiderivative2(double x) const;        // int_0^x int_0^t
};

/// Evaluator for W^(q), Z^(q) and antiderivatives at fixed (model, q).
/// Closed form per family; an optional numeric-inversion route exists for
/// cross-validation (w only, derivative order 1 only).
class ScaleFunction {
 public:
  ScaleFunction(const LevyModel& model, double q,
                ScaleSource source = ScaleSource::ClosedForm,
                InversionConfig cfg = {});

  double w(double x) const;
  double w_derivative(double x, int order) const;  // order 1..3, x > 0
  double wbar(double x) const;
  double z(double x) const;
  double zbar(double x) const;
  ScaleEval eval(double x) const;

  double q() const { return q_; }
  const LevyModel& model() const { return model_; }
  ScaleSource source() const { return source_; }
  /// Roots of psi = q (rational families only; empty for stable).
  const std::vector<double>& roots() const { return roots_; }

 private:
  LevyModel model_;
  double q_;
  ScaleSource source_;
  InversionConfig cfg_;
  ExpMixture mix_;            // rational families
  std::vector<double> roots_;
  // stable parameters
  double alpha_ = 0.0, sscale_ = 0.0;
  bool stable_ = false;

  double stable_w(double x, int order) const;
};

/// All five scale quantities at x (q > 0 required).
ScaleEval scale_eval(const LevyModel& model, double q, double x);

/// (W^(q)(0), W^(q)'(0+)) per the boundary-value trichotomy; the second
/// component is +inf for unbounded variation with no Gaussian part.
std::pair<double, double> w_zero_values(const LevyModel& model, double q);

double w_derivatives(const LevyModel& model, double q, double x, int order);

/// Numeric Laplace inversion of (psi(theta)-q)^{-1}: tilt by Phi(q) to
/// remove exponential growth, invert the bounded remainder on a deformed
/// contour, certify by node doubling. Throws NumericFailure on disagreement.
double w_numeric(const LevyModel& model, double q, double x,
                 const InversionConfig& cfg = {});

/// Roots of psi(theta) = q for the rational families, ascending.
std::vector<double> psi_roots(const LevyModel& model, double q);

}  // namespace snlevy
