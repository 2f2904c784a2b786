#pragma once

#include <cmath>
#include <vector>

#include "quadconc/matrix.hpp"

namespace quadconc {

// sqrt(192) = 8*sqrt(3), the coefficient of the sqrt(x) term in the
// Bernstein-condition deviation bound.
inline const double kSqrt192 = 8.0 * std::sqrt(3.0);

// Everything a tail/deviation bound evaluation needs: the norm quantities of
// the matrix-sigma pair, the Bernstein scale K, and the explicit
// Hanson-Wright absolute constant (the classical inequality only asserts its
// existence, so callers must choose it).
struct BoundInputs {
  NormStats norms;
  double k = 1.0;
  double hw_constant_c = 1.0;

  BoundInputs(NormStats norms, double k, double hw_constant_c = 1.0);
};

// exp(-min(t^2 / (192 K^2 ||A D_sigma||_HS^2), t / (256 K^2 ||A||_op))).
// t = 0 returns 1 by continuity; an all-zero matrix gives probability 0 for
// t > 0.
double bernstein_tail(const BoundInputs& in, double t);

// 256 K^2 ||A||_op x + 8 sqrt(3) K ||A D_sigma||_HS sqrt(x).
double bernstein_deviation(const BoundInputs& in, double x);

// The exponent rate x(t) = min(t^2 / (192 K^2 H^2), t / (256 K^2 Op)) with
// H = ||A D_sigma||_HS, Op = ||A||_op. Rejects all-zero norms.
double rate_function(const BoundInputs& in, double t);

// Exact piecewise inverse of rate_function:
//   t(x) = max(8 sqrt(3) K H sqrt(x), 256 K^2 Op x).
double inverse_rate(const BoundInputs& in, double x);

// exp(-c min(t^2 / (K^4 ||A||_HS^2), t / (K^2 ||A||_op))) with the explicit
// constant c from BoundInputs.
double hanson_wright_tail(const BoundInputs& in, double t);

// c (K^2 ||A||_op x + K^2 ||A||_HS sqrt(x)), same explicit c.
double hanson_wright_deviation(const BoundInputs& in, double x);

// 2 ||D_sigma A D_sigma||_HS sqrt(x) + 2 ||D_sigma A D_sigma||_op x, the
// Gaussian chaos deviation at confidence 1 - exp(-x).
double gaussian_chaos_deviation(const NormStats& norms, double x);
double gaussian_chaos_deviation(const SquareMatrix& a, const SigmaDiag& sig, double x);

// Tail probability implied by the Gaussian chaos deviation bound: the
// unique x >= 0 with 2 hd sqrt(x) + 2 od x = t, returned as exp(-x).
double gaussian_chaos_implied_tail(const NormStats& norms, double t);

// Regime of the optimal Chernoff multiplier: `unconstrained` when the
// stationary point lambda_bar = t / (96 K^2 H^2) already satisfies the
// admissibility constraint, `binding` when the cap
// lambda_b = 1 / (128 Op K^2) is active.
enum class ChernoffRegime { unconstrained, binding };

struct ChernoffSolution {
  double lambda_star = 0.0;
  double exponent = 0.0;  // -lambda* t + 48 lambda*^2 K^2 H^2, always <= 0
  ChernoffRegime regime = ChernoffRegime::unconstrained;
};

// Minimize the Chernoff exponent -lambda t + 48 lambda^2 K^2 H^2 over
// admissible lambda in (0, 1/(128 Op K^2)]. Requires t, Op, H > 0.
ChernoffSolution chernoff_machinery(const BoundInputs& in, double t);

enum class TailBoundKind { gaussian_chaos_implied, hanson_wright, bernstein_improved };

// Stable identifier used in CLI output columns.
const char* tail_bound_name(TailBoundKind which);

struct TailBoundCurve {
  std::vector<double> t_grid;  // strictly increasing, positive
  std::vector<double> probs;   // nonincreasing, in (0, 1]
  TailBoundKind which = TailBoundKind::bernstein_improved;
};

struct DeviationCurve {
  std::vector<double> x_grid;
  std::vector<double> values;
  TailBoundKind which = TailBoundKind::bernstein_improved;
};

// Evaluate one bound on a grid. The grid must be strictly increasing and
// positive.
TailBoundCurve tail_curve(const BoundInputs& in, const std::vector<double>& t_grid,
                          TailBoundKind which);
DeviationCurve deviation_curve(const BoundInputs& in, const std::vector<double>& x_grid,
                               TailBoundKind which);

}  // namespace quadconc
