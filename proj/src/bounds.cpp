#include "quadconc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quadconc/errors.hpp"

namespace quadconc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Negative or non-finite arguments are rejected; zero is the continuity
// boundary handled by each caller.
void require_nonneg(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

BoundInputs::BoundInputs(NormStats norms_in, double k_in, double hw_c_in)
    : norms(norms_in), k(k_in), hw_constant_c(hw_c_in) {
  if (!std::isfinite(k) || k <= 0.0) {
    throw ValidationError("BoundInputs: K must be finite and > 0");
  }
  if (!std::isfinite(hw_constant_c) || hw_constant_c <= 0.0) {
    throw ValidationError("BoundInputs: hw_constant_c must be finite and > 0");
  }
  require_nonneg(norms.hs, "BoundInputs: ||A||_HS");
  require_nonneg(norms.op, "BoundInputs: ||A||_op");
  require_nonneg(norms.hs_right_scaled, "BoundInputs: ||A D_sigma||_HS");
  require_nonneg(norms.hs_double_scaled, "BoundInputs: ||D A D||_HS");
  require_nonneg(norms.op_double_scaled, "BoundInputs: ||D A D||_op");
}

double rate_function(const BoundInputs& in, double t) {
  require_nonneg(t, "rate_function: t");
  const double h = in.norms.hs_right_scaled;
  const double op = in.norms.op;
  if (h == 0.0 && op == 0.0) {
    throw ValidationError("rate_function: all norms are zero");
  }
  if (t == 0.0) return 0.0;
  const double k2 = in.k * in.k;
  const double var_branch = h > 0.0 ? t * t / (192.0 * k2 * h * h) : kInf;
  const double lin_branch = op > 0.0 ? t / (256.0 * k2 * op) : kInf;
  return std::min(var_branch, lin_branch);
}

double inverse_rate(const BoundInputs& in, double x) {
  require_nonneg(x, "inverse_rate: x");
  const double h = in.norms.hs_right_scaled;
  const double op = in.norms.op;
  if (h == 0.0 && op == 0.0) {
    throw ValidationError("inverse_rate: all norms are zero");
  }
  if (x == 0.0) return 0.0;
  const double k2 = in.k * in.k;
  return std::max(kSqrt192 * in.k * h * std::sqrt(x), 256.0 * k2 * op * x);
}

double bernstein_tail(const BoundInputs& in, double t) {
  require_nonneg(t, "bernstein_tail: t");
  if (t == 0.0) return 1.0;
  if (in.norms.hs_right_scaled == 0.0 && in.norms.op == 0.0) return 0.0;
  return std::exp(-rate_function(in, t));
}

double bernstein_deviation(const BoundInputs& in, double x) {
  require_nonneg(x, "bernstein_deviation: x");
  const double k2 = in.k * in.k;
  return 256.0 * k2 * in.norms.op * x +
         kSqrt192 * in.k * in.norms.hs_right_scaled * std::sqrt(x);
}

double hanson_wright_tail(const BoundInputs& in, double t) {
  require_nonneg(t, "hanson_wright_tail: t");
  if (t == 0.0) return 1.0;
  const double hs = in.norms.hs;
  const double op = in.norms.op;
  if (hs == 0.0 && op == 0.0) return 0.0;
  const double k2 = in.k * in.k;
  const double var_branch = hs > 0.0 ? t * t / (k2 * k2 * hs * hs) : kInf;
  const double lin_branch = op > 0.0 ? t / (k2 * op) : kInf;
  return std::exp(-in.hw_constant_c * std::min(var_branch, lin_branch));
}

double hanson_wright_deviation(const BoundInputs& in, double x) {
  require_nonneg(x, "hanson_wright_deviation: x");
  const double k2 = in.k * in.k;
  return in.hw_constant_c *
         (k2 * in.norms.op * x + k2 * in.norms.hs * std::sqrt(x));
}

double gaussian_chaos_deviation(const NormStats& norms, double x) {
  require_nonneg(x, "gaussian_chaos_deviation: x");
  return 2.0 * norms.hs_double_scaled * std::sqrt(x) +
         2.0 * norms.op_double_scaled * x;
}

double gaussian_chaos_deviation(const SquareMatrix& a, const SigmaDiag& sig, double x) {
  return gaussian_chaos_deviation(scaled_norm_stats(a, sig), x);
}

double gaussian_chaos_implied_tail(const NormStats& norms, double t) {
  require_nonneg(t, "gaussian_chaos_implied_tail: t");
  if (t == 0.0) return 1.0;
  const double hd = norms.hs_double_scaled;
  const double od = norms.op_double_scaled;
  if (hd == 0.0 && od == 0.0) return 0.0;
  // Solve 2 od u^2 + 2 hd u = t for u = sqrt(x) >= 0. The conjugate form is
  // cancellation-free and covers od = 0 and hd = 0 alike.
  const double u = t / (hd + std::sqrt(hd * hd + 2.0 * od * t));
  return std::exp(-u * u);
}

ChernoffSolution chernoff_machinery(const BoundInputs& in, double t) {
  if (!std::isfinite(t) || t <= 0.0) {
    throw ValidationError("chernoff_machinery: t must be finite and > 0");
  }
  const double h = in.norms.hs_right_scaled;
  const double op = in.norms.op;
  if (h <= 0.0 || op <= 0.0) {
    throw ValidationError("chernoff_machinery: needs ||A D_sigma||_HS > 0 and ||A||_op > 0");
  }
  const double k2 = in.k * in.k;
  const double lambda_bar = t / (96.0 * k2 * h * h);
  const double lambda_cap = 1.0 / (128.0 * op * k2);
  ChernoffSolution sol;
  if (lambda_bar <= lambda_cap) {
    sol.lambda_star = lambda_bar;
    sol.regime = ChernoffRegime::unconstrained;
  } else {
    sol.lambda_star = lambda_cap;
    sol.regime = ChernoffRegime::binding;
  }
  const double l = sol.lambda_star;
  sol.exponent = -l * t + 48.0 * l * l * k2 * h * h;
  return sol;
}

const char* tail_bound_name(TailBoundKind which) {
  switch (which) {
    case TailBoundKind::gaussian_chaos_implied:
      return "gaussian_chaos_implied";
    case TailBoundKind::hanson_wright:
      return "hanson_wright";
    case TailBoundKind::bernstein_improved:
      return "bernstein_improved";
  }
  throw ValidationError("tail_bound_name: unknown kind");
}

namespace {

void require_increasing_positive(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) {
    throw ValidationError(std::string(what) + ": grid must be nonempty");
  }
  double prev = 0.0;
  for (double g : grid) {
    if (!std::isfinite(g) || g <= prev) {
      throw ValidationError(std::string(what) +
                            ": grid must be strictly increasing and positive");
    }
    prev = g;
  }
}

}  // namespace

TailBoundCurve tail_curve(const BoundInputs& in, const std::vector<double>& t_grid,
                          TailBoundKind which) {
  require_increasing_positive(t_grid, "tail_curve");
  TailBoundCurve curve;
  curve.t_grid = t_grid;
  curve.which = which;
  curve.probs.reserve(t_grid.size());
  for (double t : t_grid) {
    double p = 0.0;
    switch (which) {
      case TailBoundKind::gaussian_chaos_implied:
        p = gaussian_chaos_implied_tail(in.norms, t);
        break;
      case TailBoundKind::hanson_wright:
        p = hanson_wright_tail(in, t);
        break;
      case TailBoundKind::bernstein_improved:
        p = bernstein_tail(in, t);
        break;
    }
    curve.probs.push_back(p);
  }
  return curve;
}

DeviationCurve deviation_curve(const BoundInputs& in, const std::vector<double>& x_grid,
                               TailBoundKind which) {
  require_increasing_positive(x_grid, "deviation_curve");
  DeviationCurve curve;
  curve.x_grid = x_grid;
  curve.which = which;
  curve.values.reserve(x_grid.size());
  for (double x : x_grid) {
    double v = 0.0;
    switch (which) {
      case TailBoundKind::gaussian_chaos_implied:
        v = gaussian_chaos_deviation(in.norms, x);
        break;
      case TailBoundKind::hanson_wright:
        v = hanson_wright_deviation(in, x);
        break;
      case TailBoundKind::bernstein_improved:
        v = bernstein_deviation(in, x);
        break;
    }
    curve.values.push_back(v);
  }
  return curve;
}

}  // namespace quadconc
