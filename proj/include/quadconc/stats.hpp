#pragma once

#include <cstddef>
#include <cstdint>

namespace quadconc {

// One-sided exact binomial (Clopper-Pearson) bounds for k successes in n
// trials, each at the given confidence level in (0,1). The lower bound is 0
// at k = 0 and the upper bound is 1 at k = n; the k = 0 upper bound reduces
// to 1 - (1-confidence)^(1/n).
double binomial_lower_bound(std::uint64_t k, std::uint64_t n, double confidence);
double binomial_upper_bound(std::uint64_t k, std::uint64_t n, double confidence);

// P[Bin(n, p) <= k], exact via the regularized incomplete beta function.
double binomial_cdf(std::uint64_t k, std::uint64_t n, double p);

// Smallest 1-based order-statistic rank r such that the r-th smallest of n
// iid samples upper-bounds the q-quantile with the given confidence
// (distribution-free: P[Bin(n,q) <= r-1] >= confidence). Throws
// ValidationError when even r = n fails, i.e. n is too small for the
// requested (q, confidence).
std::size_t quantile_ucb_rank(std::size_t n, double q, double confidence);

}  // namespace quadconc
