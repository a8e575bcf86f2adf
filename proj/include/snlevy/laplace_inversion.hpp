#pragma once

#include <complex>
#include <functional>

namespace snlevy {

/// Inverts a Laplace transform F at t > 0 by midpoint quadrature on a
/// cotangent-deformed (Talbot) contour with n nodes. All singularities of F
/// must lie on or near the negative real axis, strictly left of the contour's
/// real-axis crossing at ~0.17 n / t.
double talbot_invert(const std::function<std::complex<double>(std::complex<double>)>& F,
                     double t, int n);

}  // namespace snlevy
