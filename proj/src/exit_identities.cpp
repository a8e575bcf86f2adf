#include "snlevy/exit_identities.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace snlevy {

namespace {

void check_range(double y, double a) {
  if (!(a > 0.0)) throw std::domain_error("exit identity: a must be positive");
  if (y < 0.0 || y > a)
    throw std::domain_error("exit identity: y must lie in [0,a]");
}

}  // namespace

double exit_up_transform(const ScaleFunction& sf, double y, double a) {
  check_range(y, a);
  return sf.w(y) / sf.w(a);
}

double reflected_at_infimum_entrance(const ScaleFunction& sf, double y,
                                     double a) {
  check_range(y, a);
  return sf.z(y) / sf.z(a);
}

double reflected_at_supremum_entrance(const ScaleFunction& sf, double y,
                                      double a) {
  check_range(y, a);
  return sf.z(a - y) -
         sf.q() * sf.w(a - y) * sf.w(a) / sf.w_derivative(a, 1);
}

double overshoot_reflected(const ScaleFunction& sf, double y, double a) {
  check_range(y, a);
  double pp0 = psi_prime_zero(sf.model());
  double C = (sf.z(a) - pp0 * sf.w(a)) / sf.w_derivative(a, 1);
  return sf.zbar(y) - pp0 * sf.wbar(y) - C * sf.w(y);
}

double overshoot_ruin(const ScaleFunction& sf, double x) {
  if (x < 0.0) throw std::domain_error("overshoot_ruin: x must be nonnegative");
  double pp0 = psi_prime_zero(sf.model());
  double ph = phi(sf.model(), sf.q());
  double D = (sf.q() - pp0 * ph) / (ph * ph);
  return sf.zbar(x) - pp0 * sf.wbar(x) - D * sf.w(x);
}

double exit_up_transform(const LevyModel& model, double q, double y, double a) {
  return exit_up_transform(ScaleFunction(model, q), y, a);
}

double reflected_at_infimum_entrance(const LevyModel& model, double q, double y,
                                     double a) {
  return reflected_at_infimum_entrance(ScaleFunction(model, q), y, a);
}

double reflected_at_supremum_entrance(const LevyModel& model, double q,
                                      double y, double a) {
  return reflected_at_supremum_entrance(ScaleFunction(model, q), y, a);
}

double overshoot_reflected(const LevyModel& model, double q, double y,
                           double a) {
  return overshoot_reflected(ScaleFunction(model, q), y, a);
}

double overshoot_ruin(const LevyModel& model, double q, double x) {
  return overshoot_ruin(ScaleFunction(model, q), x);
}

PotentialDensity doubly_reflected_potential(const LevyModel& model, double q,
                                            double a, double x) {
  check_range(x, a);
  auto sf = std::make_shared<ScaleFunction>(model, q);
  PotentialDensity pd;
  pd.a = a;
  pd.x = x;
  double za_x = sf->z(a - x);
  double wa = sf->w(a);
  pd.atom_at_zero = za_x * sf->w(0.0) / (q * wa);
  pd.density = [sf, q, a, x, za_x, wa](double y) {
    return za_x * sf->w_derivative(y, 1) / (q * wa) - sf->w(y - x);
  };
  return pd;
}

}  // namespace snlevy
