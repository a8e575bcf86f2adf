#include "snlevy/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace snlevy {

namespace {

// Series: E^(k)(y) = sum_{n>=k} n(n-1)...(n-k+1) y^{n-k} / Gamma(1+alpha n).
// Terms are all positive for y > 0, so no cancellation; cutoff when the next
// term falls below 1e-17 of the partial sum or after 500 terms.
double series(double alpha, double y, int order) {
  double sum = 0.0;
  for (int n = order; n < 500 + order; ++n) {
    double fall = 1.0;
    for (int j = 0; j < order; ++j) fall *= double(n - j);
    double lg = std::lgamma(1.0 + alpha * n);
    double term = fall * std::pow(std::abs(y), double(n - order)) * std::exp(-lg);
    if (y < 0.0 && ((n - order) % 2 != 0)) term = -term;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && n > order + 2) break;
  }
  return sum;
}

// Asymptotic leading term A(z) = (1/alpha) e^{s}, s = z^{1/alpha}.
// Derivatives follow the recurrence A^(k) = e^s s Q_k(s) / (alpha^{k+1} z^k)
// with Q_1 = 1 and Q_{k+1} = (s Q_k + Q_k + s Q_k') / alpha... expressed with
// the alpha powers folded into the coefficients below.
double exp_term(double alpha, double z, int order) {
  double s = std::pow(z, 1.0 / alpha);
  if (order == 0) return std::exp(s) / alpha;
  // Q_k as polynomial coefficients in s (ascending), including the
  // 1/alpha^k factor accumulated per differentiation step.
  std::vector<double> q{1.0 / alpha};
  for (int k = 1; k < order; ++k) {
    // Q_{k+1}(s) = [ (s+1) Q_k(s) + s Q_k'(s) ] / alpha - k Q_k(s)
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t j = 0; j < q.size(); ++j) {
      next[j + 1] += q[j] / alpha;               // s Q_k
      next[j] += q[j] / alpha;                   // Q_k
      if (j >= 1) next[j] += double(j) * q[j] / alpha;  // s Q_k'
      next[j] -= double(k) * q[j];               // -k Q_k
    }
    q = std::move(next);
  }
  double poly = 0.0, sp = 1.0;
  for (double c : q) { poly += c * sp; sp *= s; }
  return std::exp(s) * s * poly / (alpha * std::pow(z, double(order)));
}

// Algebraic correction R(z) = -sum_{k>=1} z^{-k} / Gamma(1 - alpha k),
// differentiated term-wise; truncated at the smallest term.
double algebraic_term(double alpha, double z, int order) {
  double sum = 0.0, prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 30; ++k) {
    double g = std::tgamma(1.0 - alpha * k);  // may be huge near poles
    if (!std::isfinite(g) || g == 0.0) continue;
    double fall = 1.0;
    for (int j = 0; j < order; ++j) fall *= double(-k - j);
    double term = -fall * std::pow(z, double(-k - order)) / g;
    if (std::abs(term) > prev) break;  // asymptotic series: stop growing
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double mittag_leffler(double alpha, double y, int order) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw std::domain_error("mittag_leffler: alpha must lie in (1,2]");
  if (order < 0 || order > 4)
    throw std::domain_error("mittag_leffler: order must be 0..4");
  // The expansion around infinity drops secondary exponentials of relative
  // size e^{-2 y^{1/alpha}}; keep the (cancellation-free) series until those
  // are below double precision.
  if (y <= 0.0 || std::pow(y, 1.0 / alpha) <= 36.0)
    return series(alpha, y, order);
  return exp_term(alpha, y, order) + algebraic_term(alpha, y, order);
}

}  // namespace snlevy
