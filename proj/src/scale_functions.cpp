#include "snlevy/scale_functions.hpp"

#include <cmath>

#include "snlevy/errors.hpp"
#include "snlevy/laplace_inversion.hpp"
#include "snlevy/mittag_leffler.hpp"
#include "snlevy/quadrature.hpp"

namespace snlevy {

namespace {

// (e^{rx}-1)/r, stable near r = 0
double expm1_over(double r, double x) {
  double rx = r * x;
  if (std::abs(rx) < 1e-8) return x * (1.0 + 0.5 * rx);
  return std::expm1(rx) / r;
}

// int_0^x (e^{rt}-1)/r dt = (e^{rx}-1)/r^2 - x/r
double expm1_over2(double r, double x) {
  double rx = r * x;
  if (std::abs(rx) < 1e-6) return 0.5 * x * x * (1.0 + rx / 3.0);
  return (std::expm1(rx) / r - x) / r;
}

// Meromorphic continuation of psi to the negative half-line (rational
// families only), needed to bracket the negative roots.
double psi_cont(const LevyModel& model, double theta) {
  return psi(model, std::complex<double>(theta, 0.0)).real();
}

double bisect_root(const LevyModel& model, double q, double lo, double hi) {
  double flo = psi_cont(model, lo) - q;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo));
       ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = psi_cont(model, mid) - q;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> psi_roots(const LevyModel& model, double q) {
  if (std::holds_alternative<StableSpectralNeg>(model))
    throw UnsupportedOperation("psi_roots: stable family has no rational psi");
  if (const auto* b = std::get_if<BrownianDrift>(&model)) {
    double s2 = b->sigma * b->sigma;
    double delta = std::sqrt(b->mu * b->mu + 2.0 * q * s2) / s2;
    double omega = b->mu / s2;
    return {-omega - delta, -omega + delta};
  }
  if (const auto* c = std::get_if<CramerLundbergExp>(&model)) {
    double b2 = q + c->lambda - c->mu_rate * c->p;
    double disc = std::sqrt(b2 * b2 + 4.0 * c->p * q * c->mu_rate);
    return {(b2 - disc) / (2.0 * c->p), (b2 + disc) / (2.0 * c->p)};
  }
  const auto& h = std::get<HyperExpJumpDiffusion>(model);
  const std::size_t n = h.rates.size();
  std::vector<double> roots;
  auto psiq = [&](double th) { return psi_cont(model, th) - q; };
  // one root strictly left of -rates[n-1] when sigma > 0
  if (h.sigma > 0.0) {
    double right = -h.rates[n - 1];
    double eps = 1e-9 * std::max(1.0, h.rates[n - 1]);
    while (psiq(right - eps) > 0.0) eps *= 0.5;
    double left = right - 1.0;
    while (psiq(left) < 0.0) left -= std::abs(left - right);
    roots.push_back(bisect_root(model, q, left, right - eps));
  }
  // one root between consecutive poles, approached from inside
  for (std::size_t k = n - 1; k >= 1; --k) {
    double left = -h.rates[k], right = -h.rates[k - 1];
    double eps = 1e-9 * (right - left);
    while (psiq(left + eps) < 0.0) eps *= 0.5;
    double eps2 = 1e-9 * (right - left);
    while (psiq(right - eps2) > 0.0) eps2 *= 0.5;
    roots.push_back(bisect_root(model, q, left + eps, right - eps2));
  }
  // one root in (-rates[0], 0): psi -> +inf at the pole, psi(0) - q = -q < 0
  {
    double left = -h.rates[0];
    double eps = 1e-9 * h.rates[0];
    while (psiq(left + eps) < 0.0) eps *= 0.5;
    roots.push_back(bisect_root(model, q, left + eps, 0.0));
  }
  roots.push_back(phi(model, q));
  return roots;
}

double ExpMixture::eval(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i)
    s += coef[i] * std::exp(rate[i] * x);
  return s;
}

double ExpMixture::derivative(double x, int order) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i)
    s += coef[i] * std::pow(rate[i], double(order)) * std::exp(rate[i] * x);
  return s;
}

double ExpMixture::antiderivative(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i)
    s += coef[i] * expm1_over(rate[i], x);
  return s;
}

double ExpMixture::antiderivative2(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i)
    s += coef[i] * expm1_over2(rate[i], x);
  return s;
}

ScaleFunction::ScaleFunction(const LevyModel& model, double q,
                             ScaleSource source, InversionConfig cfg)
    : model_(model), q_(q), source_(source), cfg_(cfg) {
  if (!(q > 0.0)) throw std::domain_error("ScaleFunction: q must be positive");
  validate(model);
  if (const auto* s = std::get_if<StableSpectralNeg>(&model)) {
    stable_ = true;
    alpha_ = s->alpha;
    sscale_ = s->sigma_scale;
    return;
  }
  roots_ = psi_roots(model, q);
  mix_.coef.reserve(roots_.size());
  mix_.rate = roots_;
  for (double th : roots_) mix_.coef.push_back(1.0 / psi_prime(model, th));
}

double ScaleFunction::stable_w(double y, int order) const {
  double c = q_ / std::pow(sscale_, alpha_);
  double u = c * std::pow(y, alpha_);
  double a = alpha_;
  double pre = a / std::pow(sscale_, a);
  double E1 = mittag_leffler(a, u, 1);
  if (order == 0) return pre * std::pow(y, a - 1.0) * E1;
  double E2 = mittag_leffler(a, u, 2);
  if (order == 1)
    return pre * ((a - 1.0) * std::pow(y, a - 2.0) * E1 +
                  a * c * std::pow(y, 2.0 * a - 2.0) * E2);
  double E3 = mittag_leffler(a, u, 3);
  double g = (a - 1.0) * (a - 2.0) * E1 + 3.0 * a * (a - 1.0) * u * E2 +
             a * a * u * u * E3;
  if (order == 2) return pre * std::pow(y, a - 3.0) * g;
  double E4 = mittag_leffler(a, u, 4);
  double gp = (a - 1.0) * (a - 2.0) * E2 + 3.0 * a * (a - 1.0) * (E2 + u * E3) +
              a * a * (2.0 * u * E3 + u * u * E4);
  return pre * std::pow(y, a - 4.0) * ((a - 3.0) * g + a * u * gp);
}

double ScaleFunction::w(double x) const {
  if (x < 0.0) return 0.0;
  if (source_ == ScaleSource::NumericInversion && x > 0.0)
    return w_numeric(model_, q_, x, cfg_);
  if (stable_) return x == 0.0 ? 0.0 : stable_w(x, 0);
  return mix_.eval(x);
}

double ScaleFunction::w_derivative(double x, int order) const {
  if (!(x > 0.0))
    throw std::domain_error("w_derivative: x must be positive");
  if (order < 1 || order > 3)
    throw std::domain_error("w_derivative: order must be 1..3");
  if (source_ == ScaleSource::NumericInversion) {
    if (order >= 2)
      throw UnsupportedOperation(
          "w_derivative: order >= 2 unavailable through numeric inversion");
    double h = 1e-5 * std::max(1.0, x);
    return (w_numeric(model_, q_, x + h, cfg_) -
            w_numeric(model_, q_, x - h, cfg_)) /
           (2.0 * h);
  }
  if (stable_) return stable_w(x, order);
  return mix_.derivative(x, order);
}

double ScaleFunction::wbar(double x) const {
  if (x <= 0.0) return 0.0;
  if (stable_)
    return (z(x) - 1.0) / q_;
  return mix_.antiderivative(x);
}

double ScaleFunction::z(double x) const {
  if (x <= 0.0) return 1.0;
  if (stable_) {
    double u = q_ * std::pow(x / sscale_, alpha_);
    return mittag_leffler(alpha_, u, 0);
  }
  return 1.0 + q_ * mix_.antiderivative(x);
}

double ScaleFunction::zbar(double x) const {
  if (x <= 0.0) return x;
  if (stable_) {
    double c = q_ / std::pow(sscale_, alpha_);
    double u = c * std::pow(x, alpha_);
    if (u <= 30.0) {
      // term-wise antiderivative of Z = E_alpha(c y^alpha)
      double sum = 0.0;
      double cn = 1.0;
      for (int n = 0; n < 500; ++n) {
        double term = cn * std::pow(x, alpha_ * n + 1.0) /
                      ((alpha_ * n + 1.0) * std::exp(std::lgamma(1.0 + alpha_ * n)));
        sum += term;
        if (term < 1e-17 * sum && n > 2) break;
        cn *= c;
      }
      return sum;
    }
    double y0 = std::pow(30.0 / c, 1.0 / alpha_);
    return zbar(y0) +
           adaptive_simpson([this](double t) { return z(t); }, y0, x, 1e-10);
  }
  return x + q_ * mix_.antiderivative2(x);
}

ScaleEval ScaleFunction::eval(double x) const {
  ScaleEval e;
  e.x = x;
  e.q = q_;
  e.source = source_;
  if (x < 0.0) {
    e.w = 0.0;
    e.w_prime = 0.0;
    e.wbar = 0.0;
    e.z = 1.0;
    e.zbar = x;
    return e;
  }
  e.w = w(x);
  e.w_prime = x > 0.0 ? w_derivative(x, 1) : w_zero_values(model_, q_).second;
  e.wbar = wbar(x);
  e.z = 1.0 + q_ * e.wbar;
  e.zbar = zbar(x);
  return e;
}

ScaleEval scale_eval(const LevyModel& model, double q, double x) {
  return ScaleFunction(model, q).eval(x);
}

std::pair<double, double> w_zero_values(const LevyModel& model, double q) {
  if (!(q > 0.0)) throw std::domain_error("w_zero_values: q must be positive");
  auto vc = variation_class(model);
  if (vc.bounded()) {
    double d = vc.drift;
    return {1.0 / d, (q + jump_mass(model)) / (d * d)};
  }
  double sigma = gaussian_coefficient(model);
  if (sigma > 0.0) return {0.0, 2.0 / (sigma * sigma)};
  return {0.0, std::numeric_limits<double>::infinity()};
}

double w_derivatives(const LevyModel& model, double q, double x, int order) {
  return ScaleFunction(model, q).w_derivative(x, order);
}

double w_numeric(const LevyModel& model, double q, double x,
                 const InversionConfig& cfg) {
  if (!(q > 0.0) || !(x > 0.0))
    throw std::domain_error("w_numeric: requires q > 0 and x > 0");
  if (cfg.node_count < 16)
    throw std::domain_error("w_numeric: node_count must be >= 16");
  double ph = phi(model, q);
  double dpsi = psi_prime(model, ph);
  // Tilted transform 1/(psi(s+Phi)-q) is bounded but keeps a simple pole at
  // s = 0; remove it analytically and invert the remainder.
  auto g = [&](std::complex<double> s) -> std::complex<double> {
    return 1.0 / (psi(model, s + ph) - q) - 1.0 / (dpsi * s);
  };
  auto tilted = [&](int n) {
    return 1.0 / dpsi + talbot_invert(g, x, n);
  };
  double w1 = tilted(cfg.node_count);
  double w2 = tilted(2 * cfg.node_count);
  double scale = std::max({std::abs(w1), std::abs(w2), 1e-300});
  if (std::abs(w1 - w2) > 1e-6 * scale)
    throw NumericFailure("w_numeric: node-doubling certification failed",
                         std::exp(ph * x) * w1, std::exp(ph * x) * w2);
  return std::exp(ph * x) * w2;
}

}  // namespace snlevy
