#pragma once

namespace snlevy {

/// E_alpha(y) = sum_n y^n / Gamma(1 + alpha n) and its derivatives.
///
/// Series summation to machine-precision stagnation for y <= 30, asymptotic
/// exponential form (1/alpha) e^{y^{1/alpha}} plus algebraic correction for
/// large positive y. alpha in (1,2]; order 0..4 (order 4 is internal, used
/// by the stable W''' only).
double mittag_leffler(double alpha, double y, int order = 0);

}  // namespace snlevy
