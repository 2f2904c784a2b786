#pragma once

#include <functional>

namespace quadconc {

inline constexpr double kQuadDefaultAbsTol = 1e-13;

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [lo, hi] by
// recursive bisection until the per-interval error estimate meets the
// absolute tolerance. Throws NumericalError if the subdivision depth cap
// is reached with the tolerance still unmet.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = kQuadDefaultAbsTol);

}  // namespace quadconc
