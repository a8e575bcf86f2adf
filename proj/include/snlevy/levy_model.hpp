#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace snlevy {

// The four concrete spectrally negative model families. All jump parts are
// downward by construction.

/// X_t = mu t + sigma B_t
struct BrownianDrift {
  double mu = 0.0;
  double sigma = 1.0;
};

/// X_t = p t - compound Poisson(lambda) with Exp(mu_rate) claim sizes
struct CramerLundbergExp {
  double p = 1.0;
  double lambda = 1.0;
  double mu_rate = 1.0;
};

/// X_t = sigma_scale Z_t with Z a standard spectrally negative stable
/// process of index alpha in (1,2]; psi(theta) = (sigma_scale theta)^alpha.
struct StableSpectralNeg {
  double alpha = 1.5;
  double sigma_scale = 1.0;
};

/// X_t = mu t + sigma B_t - compound Poisson(lambda) with hyperexponential
/// claim sizes: density sum_i weights[i] * rates[i] * exp(-rates[i] y).
struct HyperExpJumpDiffusion {
  double mu = 0.0;
  double sigma = 0.0;
  double lambda = 1.0;
  std::vector<double> weights;
  std::vector<double> rates;
};

using LevyModel = std::variant<BrownianDrift, CramerLundbergExp,
                               StableSpectralNeg, HyperExpJumpDiffusion>;

struct VariationClass {
  enum Tag { BoundedVariation, UnboundedVariation };
  Tag tag;
  double drift = 0.0;  // infinitesimal drift d, meaningful for BoundedVariation
  bool bounded() const { return tag == BoundedVariation; }
};

/// Validates the family invariants; throws std::invalid_argument on violation.
void validate(const LevyModel& model);

/// Laplace exponent psi(theta) = log E[exp(theta X_1)], theta >= 0.
double psi(const LevyModel& model, double theta);

/// Analytic continuation of psi to complex arguments (used by the contour
/// inversion); no domain restriction is applied.
std::complex<double> psi(const LevyModel& model, std::complex<double> theta);

/// First derivative psi'(theta) for theta > Phi(0) (real route).
double psi_prime(const LevyModel& model, double theta);

/// psi'(0+) = E[X_1]; finite for all four families.
double psi_prime_zero(const LevyModel& model);

/// Right inverse Phi(q): the largest root of psi(theta) = q, q >= 0.
double phi(const LevyModel& model, double q);

VariationClass variation_class(const LevyModel& model);

/// Total jump mass nu(-inf,0): lambda for the compound Poisson families,
/// +inf for the stable family, 0 for Brownian.
double jump_mass(const LevyModel& model);

/// Gaussian coefficient sigma (0 where absent).
double gaussian_coefficient(const LevyModel& model);

const char* family_name(const LevyModel& model);

}  // namespace snlevy
