#include "snlevy/levy_model.hpp"

#include <algorithm>
#include <numeric>

namespace snlevy {

namespace {

template <typename Scalar>
Scalar psi_impl(const BrownianDrift& m, Scalar theta) {
  return m.mu * theta + 0.5 * m.sigma * m.sigma * theta * theta;
}

template <typename Scalar>
Scalar psi_impl(const CramerLundbergExp& m, Scalar theta) {
  return m.p * theta - m.lambda * theta / (m.mu_rate + theta);
}

template <typename Scalar>
Scalar psi_impl(const StableSpectralNeg& m, Scalar theta) {
  using std::pow;
  return pow(m.sigma_scale * theta, Scalar(m.alpha));
}

template <typename Scalar>
Scalar psi_impl(const HyperExpJumpDiffusion& m, Scalar theta) {
  Scalar jump{};
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    jump += m.weights[i] * m.rates[i] / (m.rates[i] + theta);
  return m.mu * theta + 0.5 * m.sigma * m.sigma * theta * theta +
         m.lambda * (jump - 1.0);
}

template <typename Scalar>
Scalar psi_any(const LevyModel& model, Scalar theta) {
  return std::visit([&](const auto& m) { return psi_impl(m, theta); }, model);
}

}  // namespace

void validate(const LevyModel& model) {
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift>) {
          if (!(m.sigma > 0.0))
            throw std::invalid_argument("BrownianDrift: sigma must be > 0");
        } else if constexpr (std::is_same_v<M, CramerLundbergExp>) {
          if (!(m.p > 0.0) || !(m.lambda > 0.0) || !(m.mu_rate > 0.0))
            throw std::invalid_argument(
                "CramerLundbergExp: p, lambda, mu_rate must be > 0");
        } else if constexpr (std::is_same_v<M, StableSpectralNeg>) {
          if (!(m.alpha > 1.0) || !(m.alpha <= 2.0))
            throw std::invalid_argument(
                "StableSpectralNeg: alpha must lie in (1,2]");
          if (!(m.sigma_scale > 0.0))
            throw std::invalid_argument("StableSpectralNeg: scale must be > 0");
        } else {
          if (!(m.sigma >= 0.0))
            throw std::invalid_argument("HyperExpJumpDiffusion: sigma >= 0");
          if (!(m.lambda > 0.0))
            throw std::invalid_argument("HyperExpJumpDiffusion: lambda > 0");
          if (m.weights.empty() || m.weights.size() != m.rates.size())
            throw std::invalid_argument(
                "HyperExpJumpDiffusion: weights/rates size mismatch");
          double total = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
          if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument(
                "HyperExpJumpDiffusion: weights must sum to 1");
          for (std::size_t i = 0; i < m.rates.size(); ++i) {
            if (!(m.weights[i] > 0.0))
              throw std::invalid_argument("HyperExpJumpDiffusion: weights > 0");
            if (!(m.rates[i] > 0.0) ||
                (i > 0 && !(m.rates[i] > m.rates[i - 1])))
              throw std::invalid_argument(
                  "HyperExpJumpDiffusion: rates must be strictly increasing");
          }
          if (m.sigma == 0.0 && !(m.mu > 0.0))
            throw std::invalid_argument(
                "HyperExpJumpDiffusion: sigma = 0 requires mu > 0");
        }
      },
      model);
}

double psi(const LevyModel& model, double theta) {
  if (theta < 0.0)
    throw std::domain_error("psi: theta must be nonnegative");
  return psi_any(model, theta);
}

std::complex<double> psi(const LevyModel& model, std::complex<double> theta) {
  return psi_any(model, theta);
}

double psi_prime(const LevyModel& model, double theta) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift>) {
          return m.mu + m.sigma * m.sigma * theta;
        } else if constexpr (std::is_same_v<M, CramerLundbergExp>) {
          double d = m.mu_rate + theta;
          return m.p - m.lambda * m.mu_rate / (d * d);
        } else if constexpr (std::is_same_v<M, StableSpectralNeg>) {
          return m.alpha * m.sigma_scale *
                 std::pow(m.sigma_scale * theta, m.alpha - 1.0);
        } else {
          double jump = 0.0;
          for (std::size_t i = 0; i < m.weights.size(); ++i) {
            double d = m.rates[i] + theta;
            jump += m.weights[i] * m.rates[i] / (d * d);
          }
          return m.mu + m.sigma * m.sigma * theta - m.lambda * jump;
        }
      },
      model);
}

double psi_prime_zero(const LevyModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift>) {
          return m.mu;
        } else if constexpr (std::is_same_v<M, CramerLundbergExp>) {
          return m.p - m.lambda / m.mu_rate;
        } else if constexpr (std::is_same_v<M, StableSpectralNeg>) {
          return 0.0;  // d/dtheta (sigma theta)^alpha -> 0 for alpha > 1
        } else {
          double mean_claim = 0.0;
          for (std::size_t i = 0; i < m.weights.size(); ++i)
            mean_claim += m.weights[i] / m.rates[i];
          return m.mu - m.lambda * mean_claim;
        }
      },
      model);
}

namespace {

// Largest root of psi(theta) = q by bracket expansion plus hybrid
// bisection/Newton; psi is convex and increasing past Phi(0), so the
// bracket is globally safe.
double solve_phi(const LevyModel& model, double q, double lo) {
  double hi = std::max(lo, 1e-8);
  while (psi(model, hi) <= q) hi *= 2.0;
  // bisection with Newton acceleration on theta, to 1e-14 absolute
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    double mid = 0.5 * (a + b);
    double fm = psi(model, mid) - q;
    // Newton step from the midpoint, accepted only inside the bracket
    double dm = psi_prime(model, mid);
    if (dm > 0.0) {
      double nt = mid - fm / dm;
      if (nt > a && nt < b) {
        double fn = psi(model, nt) - q;
        if (fn > 0.0) b = nt; else a = nt;
        continue;
      }
    }
    if (fm > 0.0) b = mid; else a = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

double phi(const LevyModel& model, double q) {
  if (q < 0.0) throw std::domain_error("phi: q must be nonnegative");
  if (q == 0.0) {
    if (psi_prime_zero(model) >= 0.0) return 0.0;
    return solve_phi(model, 0.0, 1e-12);
  }
  double lo = (psi_prime_zero(model) >= 0.0) ? 0.0 : phi(model, 0.0);
  return solve_phi(model, q, lo);
}

VariationClass variation_class(const LevyModel& model) {
  return std::visit(
      [](const auto& m) -> VariationClass {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, CramerLundbergExp>) {
          return {VariationClass::BoundedVariation, m.p};
        } else if constexpr (std::is_same_v<M, HyperExpJumpDiffusion>) {
          if (m.sigma == 0.0) return {VariationClass::BoundedVariation, m.mu};
          return {VariationClass::UnboundedVariation, 0.0};
        } else {
          return {VariationClass::UnboundedVariation, 0.0};
        }
      },
      model);
}

double jump_mass(const LevyModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift>) {
          return 0.0;
        } else if constexpr (std::is_same_v<M, CramerLundbergExp>) {
          return m.lambda;
        } else if constexpr (std::is_same_v<M, StableSpectralNeg>) {
          return std::numeric_limits<double>::infinity();
        } else {
          return m.lambda;
        }
      },
      model);
}

double gaussian_coefficient(const LevyModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift>) return m.sigma;
        else if constexpr (std::is_same_v<M, HyperExpJumpDiffusion>) return m.sigma;
        else return 0.0;
      },
      model);
}

const char* family_name(const LevyModel& model) {
  switch (model.index()) {
    case 0: return "brownian";
    case 1: return "cl-exp";
    case 2: return "stable";
    default: return "hyperexp";
  }
}

}  // namespace snlevy
