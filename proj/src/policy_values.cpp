#include "snlevy/policy_values.hpp"

#include <cmath>
#include <stdexcept>

#include "snlevy/errors.hpp"

namespace snlevy {

double classical_barrier_value(const ScaleFunction& sf, double a, double x) {
  if (a < 0.0 || x < 0.0)
    throw std::domain_error("classical_barrier_value: a, x must be >= 0");
  if (a == 0.0) {
    auto [w0, w0p] = w_zero_values(sf.model(), sf.q());
    if (!std::isfinite(w0p)) return x;  // limit value: pay out everything now
    return x + w0 / w0p;
  }
  double wpa = sf.w_derivative(a, 1);
  if (x <= a) return sf.w(x) / wpa;
  return x - a + sf.w(a) / wpa;
}

double dividends_doubly(const ScaleFunction& sf, double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("dividends_doubly: a must be > 0");
  if (x < 0.0 || x > a)
    throw std::domain_error("dividends_doubly: x must lie in [0,a]");
  return sf.z(x) / (sf.q() * sf.w(a));
}

double injections_doubly(const ScaleFunction& sf, double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("injections_doubly: a must be > 0");
  if (x < 0.0 || x > a)
    throw std::domain_error("injections_doubly: x must lie in [0,a]");
  double pp0 = psi_prime_zero(sf.model());
  return -sf.zbar(x) - pp0 / sf.q() +
         sf.z(a) * sf.z(x) / (sf.q() * sf.w(a));
}

PolicyValueReport bailout_barrier_value(const ScaleFunction& sf,
                                        double phi_cost, double a, double x) {
  if (!(phi_cost > 1.0))
    throw std::domain_error("bailout_barrier_value: phi must be > 1");
  if (a < 0.0 || x < 0.0)
    throw std::domain_error("bailout_barrier_value: a, x must be >= 0");
  PolicyValueReport r;
  r.x = x;
  r.a = a;
  if (a == 0.0) {
    auto vc = variation_class(sf.model());
    if (!vc.bounded())
      throw UnsupportedOperation(
          "bailout_barrier_value: a = 0 defined only for bounded variation");
    double pp0 = psi_prime_zero(sf.model());
    r.value = x + (phi_cost * pp0 + (1.0 - phi_cost) * vc.drift) / sf.q();
    r.note = "zero-barrier closed form";
    return r;
  }
  double xi = std::min(x, a);
  double div = dividends_doubly(sf, a, xi);
  double inj = injections_doubly(sf, a, xi);
  if (x > a) div += x - a;  // initial lump dividend
  r.dividends = div;
  r.injections_cost = inj;
  r.value = div - phi_cost * inj;
  return r;
}

double classical_barrier_value(const LevyModel& model, double q, double a,
                               double x) {
  return classical_barrier_value(ScaleFunction(model, q), a, x);
}

double dividends_doubly(const LevyModel& model, double q, double a, double x) {
  return dividends_doubly(ScaleFunction(model, q), a, x);
}

double injections_doubly(const LevyModel& model, double q, double a, double x) {
  return injections_doubly(ScaleFunction(model, q), a, x);
}

PolicyValueReport bailout_barrier_value(const LevyModel& model, double q,
                                        double phi_cost, double a, double x) {
  return bailout_barrier_value(ScaleFunction(model, q), phi_cost, a, x);
}

}  // namespace snlevy
