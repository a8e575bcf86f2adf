#include "snlevy/laplace_inversion.hpp"

#include <cmath>
#include <stdexcept>

namespace snlevy {

// Weideman's optimized Talbot parameters; midpoint rule in the contour
// parameter. Conjugate symmetry halves the work: only theta > 0 is sampled.
double talbot_invert(const std::function<std::complex<double>(std::complex<double>)>& F,
                     double t, int n) {
  if (!(t > 0.0)) throw std::domain_error("talbot_invert: t must be positive");
  if (n < 8) throw std::domain_error("talbot_invert: need at least 8 nodes");
  const double c0 = -0.6122, c1 = 0.5017, c2 = 0.2645, beta = 0.6407;
  const double scale = double(n) / t;
  const int m = n / 2;
  const double h = 2.0 * M_PI / n;
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    double th = (k + 0.5) * h;
    double bt = beta * th;
    double cotb = std::cos(bt) / std::sin(bt);
    std::complex<double> s(scale * (c0 + c1 * th * cotb), scale * c2 * th);
    std::complex<double> ds(scale * c1 * (cotb - bt / (std::sin(bt) * std::sin(bt))),
                            scale * c2);
    std::complex<double> q = std::exp(s * t) * F(s) * ds;
    sum += q.imag();
  }
  return sum * h / M_PI;
}

}  // namespace snlevy
