#pragma once

#include <vector>

#include "quadconc/distribution.hpp"

namespace quadconc {

// The moment condition certified here, for a zero-mean X with E X^2 = sigma2:
//
//     E|X|^{2p} <= (1/2) p! sigma2 K^{2(p-1)}    for p = 2, 3, ...
//
// p = 1 is excluded: at p = 1 the inequality would read sigma2 <= sigma2/2,
// which no nondegenerate distribution satisfies, and nothing downstream
// consumes it (the MGF bounds only expand moments from p = 2 up).
inline constexpr int kBernsteinPMin = 2;
inline constexpr int kDefaultPMax = 30;

// Satisfaction tolerance on each ratio, so exact equality cases (e.g. the
// Gaussian at p = 2 with K = sqrt(3) sigma) certify cleanly.
inline constexpr double kRatioTol = 1e-12;

struct BernsteinCertificate {
  double sigma2 = 0.0;
  double k = 0.0;       // the scale tested (K, or K' for the moment-bounded form)
  int p_min = kBernsteinPMin;
  int p_max = kDefaultPMax;
  std::vector<double> ratios;  // ratios[i] is the ratio at p = p_min + i
  bool satisfied = false;
  int argmax_p = 0;
  // 0 when every requested moment was finite; otherwise the smallest p whose
  // moment overflowed, in which case the certificate only covers p below it.
  int indeterminate_from_p = 0;

  double ratio_at(int p) const { return ratios.at(static_cast<std::size_t>(p - p_min)); }
};

// Per-p ratios  E|X|^{2p} / ((1/2) p! sigma2 K^{2(p-1)})  for p in
// [2, p_max]; satisfied iff all are <= 1 + kRatioTol and none overflowed.
BernsteinCertificate check_bernstein(const DistributionSpec& d, double k, int p_max);

struct MinimalK {
  double value = 0.0;
  int argmax_p = 0;
  // True when the per-p candidate is still increasing at p_max, so `value`
  // is only a lower bound on the true sup over all p.
  bool lower_bound_only = false;
};

// Smallest K making the condition hold for p in [2, p_max]:
//   max_p (2 E|X|^{2p} / (p! sigma2))^{1/(2(p-1))}.
MinimalK minimal_k(const DistributionSpec& d, int p_max = kDefaultPMax);

// The stronger growth condition on a nonnegative variable Z (here Z = X^2):
//   E Z^p <= p K' E Z^{p-1}  for integer p >= 1.
// Ratios E Z^p / (p K' E Z^{p-1}) with p_min = 1.
BernsteinCertificate check_moment_bounded(const DistributionSpec& d, double k_prime,
                                          int p_max);
// Same check from a precomputed moment table of X (E Z^p = table at p).
BernsteinCertificate check_moment_bounded(const MomentTable& x_moments,
                                          double k_prime, int p_max);

enum class MgfInequality { subgaussian, centered_square, square };

struct MgfCheckReport {
  MgfInequality inequality = MgfInequality::subgaussian;
  std::vector<double> s_grid;
  std::vector<double> margins;  // log RHS - log LHS at each grid point
  bool all_nonnegative = false;  // min margin >= -kMgfMarginTol
};

inline constexpr double kMgfMarginTol = 1e-12;

// E exp(sX) <= exp(s^2 K^2): margins s^2 K^2 - log E exp(sX). Any real s.
MgfCheckReport verify_mgf_subgaussian(const DistributionSpec& d, double k,
                                      const std::vector<double>& s_grid);

// For 0 <= 2 s K^2 <= 1 (rejected otherwise):
//   centered:   E exp(s X^2 - s sigma2) <= exp(s^2 sigma2 K^2)
//   uncentered: E exp(s X^2)            <= exp((3/2) s sigma2)
MgfCheckReport verify_mgf_square(const DistributionSpec& d, double k,
                                 const std::vector<double>& s_grid, bool centered);

// 201 points, linear on [-10/K, 10/K].
std::vector<double> default_subgaussian_grid(double k);
// 101 points, linear on (0, 1/(2K^2)], endpoint included.
std::vector<double> default_square_grid(double k);

}  // namespace quadconc
