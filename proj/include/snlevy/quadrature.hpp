#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace snlevy {

/// Adaptive Simpson on [a,b], absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 24);

/// Nodes/weights for n-point Gauss-Legendre on [-1,1] (n <= 128 supported,
/// computed by Newton iteration on Legendre polynomials and cached).
struct GaussLegendre {
  explicit GaussLegendre(int n);
  double integrate(const std::function<double(double)>& f, double a,
                   double b) const;
  std::vector<double> nodes, weights;
};

}  // namespace snlevy
