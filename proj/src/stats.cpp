#include "quadconc/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <string>

#include "quadconc/errors.hpp"

namespace quadconc {

namespace {

void require_counts(std::uint64_t k, std::uint64_t n) {
  if (n == 0) throw ValidationError("binomial bound: n must be >= 1");
  if (k > n) throw ValidationError("binomial bound: k must be <= n");
}

void require_confidence(double confidence) {
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw ValidationError("confidence must lie in (0,1)");
  }
}

}  // namespace

double binomial_lower_bound(std::uint64_t k, std::uint64_t n, double confidence) {
  require_counts(k, n);
  require_confidence(confidence);
  if (k == 0) return 0.0;
  // Largest p with P[Bin(n,p) >= k] <= 1 - confidence:
  // P[Bin(n,p) >= k] = I_p(k, n-k+1).
  return boost::math::ibeta_inv(static_cast<double>(k),
                                static_cast<double>(n - k + 1), 1.0 - confidence);
}

double binomial_upper_bound(std::uint64_t k, std::uint64_t n, double confidence) {
  require_counts(k, n);
  require_confidence(confidence);
  if (k == n) return 1.0;
  // Smallest p with P[Bin(n,p) <= k] <= 1 - confidence:
  // P[Bin(n,p) <= k] = 1 - I_p(k+1, n-k).
  return boost::math::ibeta_inv(static_cast<double>(k + 1),
                                static_cast<double>(n - k), confidence);
}

double binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  if (n == 0) throw ValidationError("binomial_cdf: n must be >= 1");
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw ValidationError("binomial_cdf: p must lie in [0,1]");
  }
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;  // k < n here
  // P[Bin(n,p) <= k] = I_{1-p}(n-k, k+1).
  return boost::math::ibeta(static_cast<double>(n - k), static_cast<double>(k + 1),
                            1.0 - p);
}

std::size_t quantile_ucb_rank(std::size_t n, double q, double confidence) {
  if (n == 0) throw ValidationError("quantile_ucb_rank: n must be >= 1");
  if (!(q > 0.0) || !(q < 1.0)) {
    throw ValidationError("quantile_ucb_rank: q must lie in (0,1)");
  }
  require_confidence(confidence);
  if (binomial_cdf(n - 1, n, q) < confidence) {
    throw ValidationError(
        "quantile_ucb_rank: n = " + std::to_string(n) +
        " samples cannot certify the " + std::to_string(q) +
        "-quantile at confidence " + std::to_string(confidence) +
        "; increase the sample count");
  }
  // binomial_cdf(r-1, n, q) is nondecreasing in r; binary search the first
  // rank that reaches the confidence level.
  std::size_t lo = 1, hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (binomial_cdf(mid - 1, n, q) >= confidence) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace quadconc
