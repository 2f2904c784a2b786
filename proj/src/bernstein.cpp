#include "quadconc/bernstein.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "quadconc/errors.hpp"

namespace quadconc {

namespace {

double factorial(int p) {
  double v = 1.0;
  for (int m = 2; m <= p; ++m) v *= m;
  return v;
}

BernsteinCertificate finish(BernsteinCertificate cert) {
  cert.satisfied = cert.indeterminate_from_p == 0 && !cert.ratios.empty();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cert.ratios.size(); ++i) {
    if (cert.ratios[i] > 1.0 + kRatioTol) cert.satisfied = false;
    if (cert.ratios[i] > best) {
      best = cert.ratios[i];
      cert.argmax_p = cert.p_min + static_cast<int>(i);
    }
  }
  return cert;
}

}  // namespace

BernsteinCertificate check_bernstein(const DistributionSpec& d, double k, int p_max) {
  if (!(k > 0.0)) throw ValidationError("check_bernstein requires K > 0");
  if (p_max < kBernsteinPMin)
    throw ValidationError("check_bernstein requires p_max >= 2");

  BernsteinCertificate cert;
  cert.sigma2 = sigma2(d);
  cert.k = k;
  cert.p_min = kBernsteinPMin;
  cert.p_max = p_max;
  if (cert.sigma2 <= 0.0)
    throw ValidationError("distribution is degenerate (sigma^2 = 0)");

  for (int p = kBernsteinPMin; p <= p_max; ++p) {
    const double m = even_moment(d, p);
    const double denom =
        0.5 * factorial(p) * cert.sigma2 * std::pow(k, 2.0 * (p - 1));
    if (!std::isfinite(m) || !std::isfinite(denom)) {
      cert.indeterminate_from_p = p;
      break;
    }
    cert.ratios.push_back(m / denom);
  }
  return finish(std::move(cert));
}

MinimalK minimal_k(const DistributionSpec& d, int p_max) {
  if (p_max < kBernsteinPMin) throw ValidationError("minimal_k requires p_max >= 2");
  const double s2 = sigma2(d);
  if (s2 <= 0.0) throw ValidationError("distribution is degenerate (sigma^2 = 0)");

  MinimalK result;
  double prev_candidate = -std::numeric_limits<double>::infinity();
  bool increasing_at_end = false;
  for (int p = kBernsteinPMin; p <= p_max; ++p) {
    const double m = even_moment(d, p);
    if (!std::isfinite(m)) {
      throw NumericalError("minimal_k: moment overflow at p = " + std::to_string(p));
    }
    const double candidate =
        std::pow(2.0 * m / (factorial(p) * s2), 1.0 / (2.0 * (p - 1)));
    if (candidate > result.value) {
      result.value = candidate;
      result.argmax_p = p;
    }
    increasing_at_end = candidate > prev_candidate;
    prev_candidate = candidate;
  }
  result.lower_bound_only = result.argmax_p == p_max && increasing_at_end;
  return result;
}

namespace {

BernsteinCertificate moment_bounded_impl(double s2,
                                         const std::vector<double>& z_moments,
                                         double k_prime, int p_max) {
  // z_moments[p] = E Z^p for p = 0..p_max, Z = X^2 >= 0.
  BernsteinCertificate cert;
  cert.sigma2 = s2;
  cert.k = k_prime;
  cert.p_min = 1;
  cert.p_max = p_max;
  for (int p = 1; p <= p_max; ++p) {
    const double num = z_moments[static_cast<std::size_t>(p)];
    const double den = p * k_prime * z_moments[static_cast<std::size_t>(p - 1)];
    if (!std::isfinite(num) || !std::isfinite(den)) {
      cert.indeterminate_from_p = p;
      break;
    }
    cert.ratios.push_back(num / den);
  }
  return finish(std::move(cert));
}

}  // namespace

BernsteinCertificate check_moment_bounded(const DistributionSpec& d, double k_prime,
                                          int p_max) {
  if (!(k_prime > 0.0)) throw ValidationError("check_moment_bounded requires K' > 0");
  if (p_max < 1) throw ValidationError("check_moment_bounded requires p_max >= 1");
  std::vector<double> z(static_cast<std::size_t>(p_max) + 1);
  z[0] = 1.0;
  for (int p = 1; p <= p_max; ++p) z[static_cast<std::size_t>(p)] = even_moment(d, p);
  return moment_bounded_impl(sigma2(d), z, k_prime, p_max);
}

BernsteinCertificate check_moment_bounded(const MomentTable& x_moments,
                                          double k_prime, int p_max) {
  if (!(k_prime > 0.0)) throw ValidationError("check_moment_bounded requires K' > 0");
  if (p_max < 1) throw ValidationError("check_moment_bounded requires p_max >= 1");
  std::vector<double> z(static_cast<std::size_t>(p_max) + 1);
  z[0] = 1.0;
  for (int p = 1; p <= p_max; ++p) {
    const auto it = x_moments.even_moments.find(p);
    if (it == x_moments.even_moments.end()) {
      throw ValidationError("moment table is missing p = " + std::to_string(p));
    }
    z[static_cast<std::size_t>(p)] = it->second;
  }
  return moment_bounded_impl(x_moments.sigma2, z, k_prime, p_max);
}

namespace {

MgfCheckReport finish_report(MgfCheckReport r) {
  r.all_nonnegative = !r.margins.empty();
  for (double m : r.margins) {
    if (!(m >= -kMgfMarginTol)) r.all_nonnegative = false;
  }
  return r;
}

}  // namespace

MgfCheckReport verify_mgf_subgaussian(const DistributionSpec& d, double k,
                                      const std::vector<double>& s_grid) {
  if (!(k > 0.0)) throw ValidationError("verify_mgf_subgaussian requires K > 0");
  MgfCheckReport r;
  r.inequality = MgfInequality::subgaussian;
  r.s_grid = s_grid;
  r.margins.reserve(s_grid.size());
  for (double s : s_grid) {
    r.margins.push_back(s * s * k * k - std::log(mgf(d, s)));
  }
  return finish_report(std::move(r));
}

MgfCheckReport verify_mgf_square(const DistributionSpec& d, double k,
                                 const std::vector<double>& s_grid, bool centered) {
  if (!(k > 0.0)) throw ValidationError("verify_mgf_square requires K > 0");
  const double s2 = sigma2(d);
  MgfCheckReport r;
  r.inequality = centered ? MgfInequality::centered_square : MgfInequality::square;
  r.s_grid = s_grid;
  r.margins.reserve(s_grid.size());
  for (double s : s_grid) {
    // One-ulp slack so the grid endpoint s = 1/(2K^2) is never rejected for
    // rounding of the product.
    if (!(s >= 0.0) || !(2.0 * s * k * k <= 1.0 + 4e-16)) {
      throw ValidationError("verify_mgf_square needs 0 <= 2 s K^2 <= 1; got s = " +
                            std::to_string(s));
    }
    const double lhs = std::log(mgf_square(d, s));
    const double rhs = centered ? s * s2 + s * s * s2 * k * k : 1.5 * s * s2;
    r.margins.push_back(rhs - lhs);
  }
  return finish_report(std::move(r));
}

std::vector<double> default_subgaussian_grid(double k) {
  if (!(k > 0.0)) throw ValidationError("grid requires K > 0");
  std::vector<double> g;
  g.reserve(201);
  const double hi = 10.0 / k;
  for (int i = 0; i <= 200; ++i) {
    g.push_back(-hi + (2.0 * hi) * i / 200.0);
  }
  return g;
}

std::vector<double> default_square_grid(double k) {
  if (!(k > 0.0)) throw ValidationError("grid requires K > 0");
  std::vector<double> g;
  g.reserve(101);
  const double smax = 1.0 / (2.0 * k * k);
  for (int i = 1; i <= 101; ++i) {
    g.push_back(smax * (i / 101.0));
  }
  return g;
}

}  // namespace quadconc
