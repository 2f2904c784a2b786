#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "quadconc/bounds.hpp"
#include "quadconc/distribution.hpp"
#include "quadconc/matrix.hpp"

namespace quadconc {

// Number of worker threads: the explicit `workers` argument wins, else the
// QUADCONC_THREADS environment variable, else hardware concurrency. Output
// never depends on the resolved value.
unsigned resolve_workers(unsigned workers);

inline constexpr std::uint64_t kDefaultChunkSize = 65536;
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 24;

struct SimConfig {
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = kDefaultChunkSize;
  double confidence = 0.99;
};

struct TailEstimate {
  double t = 0.0;
  std::uint64_t exceed_count = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;   // one-sided exact binomial lower bound
  double ci_high = 0.0;  // one-sided exact binomial upper bound
};

// E[xi^T A xi] = sum_i a_ii sigma_i^2 for independent centered coordinates.
double exact_mean(const SquareMatrix& a, const SigmaDiag& sig);

// Var(xi^T A xi) = sum_i a_ii^2 (E xi_i^4 - sigma_i^4)
//                + sum_{i != j} (a_ij^2 + a_ij a_ji) sigma_i^2 sigma_j^2.
double exact_variance(const SquareMatrix& a, const std::vector<DistributionSpec>& dists);

// Per-coordinate standard deviations of the given distributions.
SigmaDiag sigmas_of(const std::vector<DistributionSpec>& dists);

// All sample_count centered values xi^T A xi - exact_mean, indexed by global
// sample position. Bit-identical for fixed cfg regardless of worker count:
// sample s of chunk c consumes words s*n..s*n+n-1 of stream (seed, c).
std::vector<double> sample_centered_values(const SquareMatrix& a,
                                           const std::vector<DistributionSpec>& dists,
                                           const SimConfig& cfg, unsigned workers = 0);

// Empirical tail frequencies P[centered > t] over the grid, with exact
// binomial bounds at cfg.confidence. Grid must be strictly increasing.
std::vector<TailEstimate> simulate_tail(const SquareMatrix& a,
                                        const std::vector<DistributionSpec>& dists,
                                        const SimConfig& cfg,
                                        const std::vector<double>& t_grid,
                                        unsigned workers = 0);

// Exact P[centered > t] for finite-support coordinates by full enumeration.
// Rejects state spaces above kEnumerationCap with the computed size.
std::vector<double> exact_tail_enumerate(const SquareMatrix& a,
                                         const std::vector<DistributionSpec>& dists,
                                         const std::vector<double>& t_grid);

// The (1 - exp(-x))-quantile of the sampled centered values.
double empirical_quantile(const SquareMatrix& a, const std::vector<DistributionSpec>& dists,
                          const SimConfig& cfg, double x, unsigned workers = 0);

struct QuantileEstimate {
  double x = 0.0;
  double prob = 0.0;      // 1 - exp(-x)
  double quantile = 0.0;  // order statistic at rank ceil(prob * N)
  double ucb = 0.0;       // distribution-free upper confidence bound
};

// Point quantile plus its order-statistic upper confidence bound at
// cfg.confidence, from one shared sample set per call.
std::vector<QuantileEstimate> empirical_quantiles_with_confidence(
    const SquareMatrix& a, const std::vector<DistributionSpec>& dists,
    const SimConfig& cfg, const std::vector<double>& x_grid, unsigned workers = 0);

struct CompareRow {
  double x = 0.0;
  double quantile = 0.0;
  double quantile_ucb = 0.0;
  double bernstein = 0.0;
  double hanson_wright = 0.0;
  double gaussian_chaos = 0.0;  // NaN unless every coordinate is Gaussian
};

struct CompareReport {
  double k = 0.0;  // Bernstein scale used for the bound columns
  bool k_auto = false;
  std::vector<double> per_coordinate_k;  // populated when k_auto
  double hw_constant_c = 1.0;
  bool degenerate = false;  // all-zero matrix: every column identically 0
  bool all_gaussian = false;
  NormStats norms;
  std::vector<CompareRow> rows;
};

// Empirical quantiles against the three analytic deviation bounds on a
// shared sample set. K is taken from `k` when given, else derived as the max
// per-coordinate minimal certified scale.
CompareReport compare_bounds(const SquareMatrix& a, const std::vector<DistributionSpec>& dists,
                             const SimConfig& cfg, const std::vector<double>& x_grid,
                             std::optional<double> k = std::nullopt,
                             double hw_constant_c = 1.0, unsigned workers = 0);

}  // namespace quadconc
