#include "snlevy/barrier_optimizer.hpp"

#include <cmath>

#include "snlevy/errors.hpp"
#include "snlevy/mittag_leffler.hpp"
#include "snlevy/policy_values.hpp"
#include "snlevy/quadrature.hpp"

namespace snlevy {

namespace {

// Golden-section minimization of W' on [0, A]; A is expanded until W' has
// clearly entered its exponential-growth regime.
double generic_minimize_wprime(const ScaleFunction& sf) {
  auto f = [&](double x) {
    return x <= 0.0 ? w_zero_values(sf.model(), sf.q()).second
                    : sf.w_derivative(x, 1);
  };
  double A = 1.0;
  while (!(f(A) > 2.0 * f(0.5 * A)) && A < 1e6) A *= 2.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = A;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-11 * std::max(1.0, b)) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  double g = 0.5 * (a + b);
  // Refine by bisection on W'' where the family is smooth (all four closed
  // forms are); golden section alone only resolves the minimum to ~sqrt(eps).
  if (sf.source() == ScaleSource::ClosedForm) {
    double lo = std::max(0.5 * g, 1e-12), hi = std::min(2.0 * g + 1e-6, A);
    double wlo = sf.w_derivative(lo, 2), whi = sf.w_derivative(hi, 2);
    if (wlo < 0.0 && whi > 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (sf.w_derivative(mid, 2) < 0.0) lo = mid; else hi = mid;
      }
      g = 0.5 * (lo + hi);
    } else if (wlo >= 0.0 && sf.w_derivative(1e-9, 2) >= 0.0) {
      g = 0.0;  // W' already increasing from the origin
    }
  }
  // Compare against the boundary candidate a = 0.
  if (f(0.0) <= f(g)) g = 0.0;
  return g;
}

BarrierSolution classical_closed_form(const LevyModel& model, double q) {
  BarrierSolution sol;
  if (const auto* b = std::get_if<BrownianDrift>(&model)) {
    if (b->mu <= 0.0) {
      sol.method = BarrierSolution::ZeroByCondition;
      sol.reason = "mu <= 0: take out all dividends immediately";
      return sol;
    }
    double s2 = b->sigma * b->sigma;
    double delta = std::sqrt(b->mu * b->mu + 2.0 * q * s2) / s2;
    double omega = b->mu / s2;
    sol.level = std::log(std::abs((delta + omega) / (delta - omega))) / delta;
    return sol;
  }
  if (const auto* c = std::get_if<CramerLundbergExp>(&model)) {
    double lhs = c->p * c->lambda * c->mu_rate;
    double rhs = (q + c->lambda) * (q + c->lambda);
    if (lhs <= rhs) {
      sol.method = BarrierSolution::ZeroByCondition;
      sol.reason = "p*lambda*mu_rate <= (q+lambda)^2: W''(0) >= 0";
      return sol;
    }
    auto roots = psi_roots(model, q);
    double qm = roots[0], qp = roots[1];
    sol.level = std::log(qm * qm * (c->mu_rate + qm) /
                         (qp * qp * (c->mu_rate + qp))) /
                (qp - qm);
    return sol;
  }
  if (const auto* s = std::get_if<StableSpectralNeg>(&model)) {
    double a = s->alpha;
    auto h = [a](double u) {
      return (a - 1.0) * (a - 2.0) * mittag_leffler(a, u, 1) +
             3.0 * a * (a - 1.0) * u * mittag_leffler(a, u, 2) +
             a * a * u * u * mittag_leffler(a, u, 3);
    };
    if (!(h(1e-12) < 0.0)) {
      sol.method = BarrierSolution::ZeroByCondition;
      sol.reason = "W''(0+) >= 0 (alpha = 2 driftless case)";
      return sol;
    }
    double hi = 1.0;
    while (h(hi) < 0.0) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
      double mid = 0.5 * (lo + hi);
      if (h(mid) < 0.0) lo = mid; else hi = mid;
    }
    double u = 0.5 * (lo + hi);
    sol.level = s->sigma_scale * std::pow(q, -1.0 / a) * std::pow(u, 1.0 / a);
    return sol;
  }
  // hyperexponential: smallest nonnegative root of W''(x) = 0
  ScaleFunction sf(model, q);
  auto wpp = [&](double x) { return sf.w_derivative(x, 2); };
  if (wpp(1e-12) >= 0.0) {
    sol.method = BarrierSolution::ZeroByCondition;
    sol.reason = "W''(0+) >= 0";
    return sol;
  }
  double hi = 1.0;
  while (wpp(hi) < 0.0) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (wpp(mid) < 0.0) lo = mid; else hi = mid;
  }
  sol.level = 0.5 * (lo + hi);
  return sol;
}

}  // namespace

BarrierSolution optimal_classical_barrier(const LevyModel& model, double q) {
  if (!(q > 0.0))
    throw std::domain_error("optimal_classical_barrier: q must be > 0");
  ScaleFunction sf(model, q);
  BarrierSolution sol = classical_closed_form(model, q);
  double generic = generic_minimize_wprime(sf);
  if (std::abs(generic - sol.level) > 1e-6 * std::max(1.0, sol.level))
    throw NumericFailure(
        "optimal_classical_barrier: closed form and generic minimizer disagree",
        sol.level, generic);
  sol.criterion_residual =
      sol.level > 0.0 ? sf.w_derivative(sol.level, 2) : 0.0;
  return sol;
}

double bailout_criterion(const ScaleFunction& sf, double phi_cost, double a) {
  double wa = sf.w(a);
  return (phi_cost * sf.z(a) - 1.0) * sf.w_derivative(a, 1) -
         phi_cost * sf.q() * wa * wa;
}

double bailout_criterion_f(const ScaleFunction& sf, double phi_cost, double a) {
  // H(a) = E_0[e^{-q tauhat_a}], the y = 0 entrance transform
  double wa = sf.w(a);
  double h = sf.z(a) - sf.q() * wa * wa / sf.w_derivative(a, 1);
  return (phi_cost * h - 1.0) * sf.w_derivative(a, 1) / (sf.q() * wa * wa);
}

BarrierSolution optimal_bailout_barrier(const LevyModel& model, double q,
                                        double phi_cost) {
  if (!(q > 0.0) || !(phi_cost > 1.0))
    throw std::domain_error("optimal_bailout_barrier: need q > 0, phi > 1");
  BarrierSolution sol;
  if (gaussian_coefficient(model) == 0.0 &&
      jump_mass(model) <= q / (phi_cost - 1.0)) {
    sol.method = BarrierSolution::ZeroByCondition;
    sol.reason = "nu(-inf,0) <= q/(phi-1) and sigma = 0";
    return sol;
  }
  ScaleFunction sf(model, q);
  auto G = [&](double a) { return bailout_criterion(sf, phi_cost, a); };
  double lo = 1e-9;
  while (!(G(lo) > 0.0) && lo < 1e-3) lo *= 10.0;
  double cap = 100.0 / phi(model, q);
  double hi = std::max(1.0, 2.0 * lo);
  while (G(hi) > 0.0) {
    hi *= 2.0;
    if (hi > cap)
      throw NumericFailure("optimal_bailout_barrier: bracketing failed", lo, hi);
  }
  for (int it = 0; it < 300 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (G(mid) > 0.0) lo = mid; else hi = mid;
  }
  sol.level = 0.5 * (lo + hi);
  sol.method = BarrierSolution::GenericRootFind;
  sol.criterion_residual = G(sol.level);
  return sol;
}

namespace {

struct ValueFn {
  const ScaleFunction& sf;
  ValueFunctionDescriptor d;
  double f0;      // value at 0+
  double va;      // value at the barrier
  double coefZ = 0.0;  // bail-out: (1 - phi Z(a)) / (q W(a))

  explicit ValueFn(const ScaleFunction& s, const ValueFunctionDescriptor& fd)
      : sf(s), d(fd) {
    if (d.kind == ValueFunctionDescriptor::Classical) {
      f0 = classical_barrier_value(sf, d.barrier, 0.0);
      va = classical_barrier_value(sf, d.barrier, d.barrier);
    } else {
      coefZ = (1.0 - d.phi_cost * sf.z(d.barrier)) /
              (sf.q() * sf.w(d.barrier));
      f0 = value(0.0);
      va = value(d.barrier);
    }
  }

  double value(double x) const {
    if (d.kind == ValueFunctionDescriptor::Classical) {
      if (x < 0.0) return 0.0;
      if (x <= d.barrier) return sf.w(x) / sf.w_derivative(d.barrier, 1);
      return x - d.barrier + va;
    }
    if (x < 0.0) return f0 + d.phi_cost * x;
    if (x <= d.barrier) {
      double pp0 = psi_prime_zero(sf.model());
      return d.phi_cost * (sf.zbar(x) + pp0 / sf.q()) + sf.z(x) * coefZ;
    }
    return x - d.barrier + va;
  }

  double deriv1(double x) const {
    if (d.kind == ValueFunctionDescriptor::Classical) {
      if (x <= 0.0 || x > d.barrier) return x > d.barrier ? 1.0 : 0.0;
      return sf.w_derivative(x, 1) / sf.w_derivative(d.barrier, 1);
    }
    if (x < 0.0) return d.phi_cost;
    if (x <= d.barrier)
      return d.phi_cost * sf.z(x) + sf.q() * sf.w(x) * coefZ;
    return 1.0;
  }

  double deriv2(double x) const {
    if (x <= 0.0 || x > d.barrier) return 0.0;
    if (d.kind == ValueFunctionDescriptor::Classical)
      return sf.w_derivative(x, 2) / sf.w_derivative(d.barrier, 1);
    return d.phi_cost * sf.q() * sf.w(x) +
           sf.q() * sf.w_derivative(x, 1) * coefZ;
  }
};

// int_0^inf f(x - y) rate e^{-rate y} dy for one claim-size mixture
// component: interior part via u = e^{-rate y} (Gauss-Legendre, split at
// the images of the kinks), tail below 0 integrated analytically.
double claim_component_integral(const ValueFn& f, double x, double rate) {
  static const GaussLegendre gl(128);
  double tail;
  if (f.d.kind == ValueFunctionDescriptor::Classical) {
    tail = 0.0;  // f vanishes below 0
  } else {
    // f(z) = f0 + phi z for z < 0
    tail = std::exp(-rate * x) * (f.f0 - f.d.phi_cost / rate);
  }
  auto integrand = [&](double u) { return f.value(x + std::log(u) / rate); };
  double u_lo = std::exp(-rate * x);
  std::vector<double> cuts{u_lo};
  if (x > f.d.barrier) {
    double uk = std::exp(-rate * (x - f.d.barrier));
    if (uk > u_lo && uk < 1.0) cuts.push_back(uk);
  }
  cuts.push_back(1.0);
  double interior = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    interior += gl.integrate(integrand, cuts[i], cuts[i + 1]);
  return interior + tail;
}

}  // namespace

double generator_apply(const LevyModel& model, double q,
                       const ValueFunctionDescriptor& fd, double x) {
  if (!(x > 0.0)) throw std::domain_error("generator_apply: x must be > 0");
  if (std::holds_alternative<StableSpectralNeg>(model))
    throw UnsupportedOperation(
        "generator_apply: stable family needs infinite-activity quadrature");
  ScaleFunction sf(model, q);
  ValueFn f(sf, fd);
  double fx = f.value(x);
  double res = -q * fx;
  if (const auto* b = std::get_if<BrownianDrift>(&model)) {
    res += 0.5 * b->sigma * b->sigma * f.deriv2(x) + b->mu * f.deriv1(x);
    return res;
  }
  if (const auto* c = std::get_if<CramerLundbergExp>(&model)) {
    res += c->p * f.deriv1(x);
    res += c->lambda * (claim_component_integral(f, x, c->mu_rate) - fx);
    return res;
  }
  const auto& h = std::get<HyperExpJumpDiffusion>(model);
  res += 0.5 * h.sigma * h.sigma * f.deriv2(x) + h.mu * f.deriv1(x);
  double jump = 0.0;
  for (std::size_t i = 0; i < h.rates.size(); ++i)
    jump += h.weights[i] * claim_component_integral(f, x, h.rates[i]);
  res += h.lambda * (jump - fx);
  return res;
}

namespace {

HjbReport hjb_grid_report(const LevyModel& model, double q,
                          const ValueFunctionDescriptor& fd, double barrier,
                          double x_max, int n_grid) {
  HjbReport rep;
  rep.barrier = barrier;
  ScaleFunction sf(model, q);
  ValueFn f(sf, fd);
  auto push = [&](double x) {
    if (std::abs(x - barrier) < 1e-9 || x <= 0.0) return;  // kink excluded
    double r = generator_apply(model, q, fd, x);
    rep.grid.push_back(x);
    rep.residuals.push_back(r);
    rep.scale = std::max(rep.scale, std::abs(q * f.value(x)));
    if (x > barrier) rep.max_violation = std::max(rep.max_violation, r);
    else rep.interior_max_abs = std::max(rep.interior_max_abs, std::abs(r));
  };
  if (barrier > 0.0) {
    int n_in = std::max(2, n_grid / 4);
    for (int i = 1; i <= n_in; ++i)
      push(barrier * double(i) / double(n_in + 1));
  }
  if (x_max > barrier) {
    for (int i = 1; i <= n_grid; ++i)
      push(barrier + (x_max - barrier) * double(i) / double(n_grid));
  }
  rep.condition_holds = rep.max_violation <= 1e-7 * rep.scale &&
                        rep.interior_max_abs <= 1e-7 * rep.scale;
  return rep;
}

}  // namespace

HjbReport verify_hjb_classical(const LevyModel& model, double q, double x_max,
                               int n_grid) {
  BarrierSolution c = optimal_classical_barrier(model, q);
  ValueFunctionDescriptor fd{ValueFunctionDescriptor::Classical, c.level, 0.0};
  return hjb_grid_report(model, q, fd, c.level, x_max, n_grid);
}

HjbReport verify_hjb_bailout_interior(const LevyModel& model, double q,
                                      double phi_cost, int n_grid) {
  BarrierSolution d = optimal_bailout_barrier(model, q, phi_cost);
  ValueFunctionDescriptor fd{ValueFunctionDescriptor::Bailout, d.level,
                             phi_cost};
  return hjb_grid_report(model, q, fd, d.level, d.level, n_grid);
}

}  // namespace snlevy
