#include "quadconc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "quadconc/bernstein.hpp"
#include "quadconc/errors.hpp"
#include "quadconc/random.hpp"
#include "quadconc/stats.hpp"

namespace quadconc {

namespace {

void require_dims(const SquareMatrix& a, std::size_t n_dists) {
  if (a.dim() != n_dists) {
    throw ValidationError("matrix dimension " + std::to_string(a.dim()) +
                          " does not match " + std::to_string(n_dists) +
                          " coordinate distributions");
  }
}

void require_config(const SimConfig& cfg) {
  if (cfg.sample_count == 0) throw ValidationError("sample_count must be >= 1");
  if (cfg.chunk_size == 0) throw ValidationError("chunk_size must be >= 1");
  if (!(cfg.confidence > 0.0) || !(cfg.confidence < 1.0)) {
    throw ValidationError("confidence must lie in (0,1)");
  }
}

void require_increasing(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) {
    throw ValidationError(std::string(what) + ": grid must be nonempty");
  }
  double prev = -std::numeric_limits<double>::infinity();
  for (double g : grid) {
    if (!std::isfinite(g) || g <= prev) {
      throw ValidationError(std::string(what) + ": grid must be strictly increasing");
    }
    prev = g;
  }
}

// Run per_chunk(c) for every chunk index, on up to `workers` threads. The
// worker that executes a chunk never affects its output; any exception is
// rethrown on the calling thread.
template <typename Fn>
void run_chunks(std::uint64_t n_chunks, unsigned workers, Fn&& per_chunk) {
  if (workers <= 1 || n_chunks <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) per_chunk(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        per_chunk(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const unsigned count = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t chunk_count(const SimConfig& cfg) {
  return (cfg.sample_count + cfg.chunk_size - 1) / cfg.chunk_size;
}

std::uint64_t chunk_len(const SimConfig& cfg, std::uint64_t c) {
  const std::uint64_t base = c * cfg.chunk_size;
  return std::min(cfg.chunk_size, cfg.sample_count - base);
}

// 1-based rank of the q-quantile order statistic among n samples.
std::size_t quantile_rank(std::uint64_t n, double q) {
  double r = std::ceil(q * static_cast<double>(n));
  if (r < 1.0) r = 1.0;
  const double nmax = static_cast<double>(n);
  if (r > nmax) r = nmax;
  return static_cast<std::size_t>(r);
}

}  // namespace

unsigned resolve_workers(unsigned workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("QUADCONC_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) {
      return static_cast<unsigned>(v);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

double exact_mean(const SquareMatrix& a, const SigmaDiag& sig) {
  if (a.dim() != sig.dim()) {
    throw ValidationError("exact_mean: matrix and sigma dimensions differ");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m += a(i, i) * sig[i] * sig[i];
  return m;
}

double exact_variance(const SquareMatrix& a, const std::vector<DistributionSpec>& dists) {
  require_dims(a, dists.size());
  const std::size_t n = a.dim();
  std::vector<double> s2(n), m4(n);
  for (std::size_t i = 0; i < n; ++i) {
    s2[i] = sigma2(dists[i]);
    m4[i] = even_moment(dists[i], 2);
  }
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    var += a(i, i) * a(i, i) * (m4[i] - s2[i] * s2[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      var += (a(i, j) * a(i, j) + a(i, j) * a(j, i)) * s2[i] * s2[j];
    }
  }
  return var;
}

SigmaDiag sigmas_of(const std::vector<DistributionSpec>& dists) {
  std::vector<double> s;
  s.reserve(dists.size());
  for (const auto& d : dists) s.push_back(std::sqrt(sigma2(d)));
  return SigmaDiag(std::move(s));
}

std::vector<double> sample_centered_values(const SquareMatrix& a,
                                           const std::vector<DistributionSpec>& dists,
                                           const SimConfig& cfg, unsigned workers) {
  require_dims(a, dists.size());
  require_config(cfg);
  const std::size_t n = a.dim();
  const double mean = exact_mean(a, sigmas_of(dists));
  std::vector<double> values(cfg.sample_count);
  const std::uint64_t n_chunks = chunk_count(cfg);
  run_chunks(n_chunks, resolve_workers(workers), [&](std::uint64_t c) {
    RandomStream rs(cfg.seed, c);
    const std::uint64_t base = c * cfg.chunk_size;
    const std::uint64_t len = chunk_len(cfg, c);
    std::vector<double> xi(n);
    for (std::uint64_t s = 0; s < len; ++s) {
      for (std::size_t i = 0; i < n; ++i) xi[i] = draw(dists[i], rs);
      values[base + s] = quadratic_form(a, xi) - mean;
    }
  });
  return values;
}

std::vector<TailEstimate> simulate_tail(const SquareMatrix& a,
                                        const std::vector<DistributionSpec>& dists,
                                        const SimConfig& cfg,
                                        const std::vector<double>& t_grid,
                                        unsigned workers) {
  require_dims(a, dists.size());
  require_config(cfg);
  require_increasing(t_grid, "simulate_tail");
  const std::size_t n = a.dim();
  const std::size_t m = t_grid.size();
  const double mean = exact_mean(a, sigmas_of(dists));
  const std::uint64_t n_chunks = chunk_count(cfg);

  // hist[c][idx] counts chunk-c samples whose value v has lower_bound(grid, v)
  // == idx, i.e. v exceeds exactly the grid points before idx. Integer sums
  // make the reduction order-independent.
  std::vector<std::vector<std::uint64_t>> hist(n_chunks);
  run_chunks(n_chunks, resolve_workers(workers), [&](std::uint64_t c) {
    RandomStream rs(cfg.seed, c);
    const std::uint64_t len = chunk_len(cfg, c);
    std::vector<std::uint64_t> h(m + 1, 0);
    std::vector<double> xi(n);
    for (std::uint64_t s = 0; s < len; ++s) {
      for (std::size_t i = 0; i < n; ++i) xi[i] = draw(dists[i], rs);
      const double v = quadratic_form(a, xi) - mean;
      const std::size_t idx = static_cast<std::size_t>(
          std::lower_bound(t_grid.begin(), t_grid.end(), v) - t_grid.begin());
      ++h[idx];
    }
    hist[c] = std::move(h);
  });

  std::vector<std::uint64_t> total(m + 1, 0);
  for (const auto& h : hist) {
    for (std::size_t i = 0; i <= m; ++i) total[i] += h[i];
  }

  std::vector<TailEstimate> out(m);
  std::uint64_t exceed = 0;
  for (std::size_t j = m; j-- > 0;) {
    exceed += total[j + 1];
    TailEstimate& e = out[j];
    e.t = t_grid[j];
    e.exceed_count = exceed;
    e.p_hat = static_cast<double>(exceed) / static_cast<double>(cfg.sample_count);
    e.ci_low = binomial_lower_bound(exceed, cfg.sample_count, cfg.confidence);
    e.ci_high = binomial_upper_bound(exceed, cfg.sample_count, cfg.confidence);
  }
  return out;
}

namespace {

// Depth-first sweep over the product of finite supports, carrying the
// partial quadratic form and the product of atom probabilities.
struct Enumerator {
  const SquareMatrix& a;
  const std::vector<std::vector<SupportAtom>>& supports;
  const std::vector<double>& grid;
  double mean;
  std::vector<double> v;
  std::vector<double> mass;  // mass[idx] as in simulate_tail's histogram

  Enumerator(const SquareMatrix& a_in,
             const std::vector<std::vector<SupportAtom>>& supports_in,
             const std::vector<double>& grid_in, double mean_in)
      : a(a_in), supports(supports_in), grid(grid_in), mean(mean_in),
        v(a_in.dim(), 0.0), mass(grid_in.size() + 1, 0.0) {}

  void walk(std::size_t d, double qf, double prob) {
    if (d == a.dim()) {
      const double centered = qf - mean;
      const std::size_t idx = static_cast<std::size_t>(
          std::lower_bound(grid.begin(), grid.end(), centered) - grid.begin());
      mass[idx] += prob;
      return;
    }
    // The coupling of coordinate d to the ones already fixed does not depend
    // on the atom chosen, so hoist it out of the atom loop.
    double cross = 0.0;
    for (std::size_t i = 0; i < d; ++i) cross += (a(i, d) + a(d, i)) * v[i];
    const double add = a(d, d);
    for (const SupportAtom& atom : supports[d]) {
      v[d] = atom.value;
      walk(d + 1, qf + add * atom.value * atom.value + atom.value * cross,
           prob * atom.prob);
    }
  }
};

}  // namespace

std::vector<double> exact_tail_enumerate(const SquareMatrix& a,
                                         const std::vector<DistributionSpec>& dists,
                                         const std::vector<double>& t_grid) {
  require_dims(a, dists.size());
  require_increasing(t_grid, "exact_tail_enumerate");
  std::vector<std::vector<SupportAtom>> supports;
  supports.reserve(dists.size());
  double states = 1.0;
  for (const auto& d : dists) {
    supports.push_back(discrete_support(d));
    states *= static_cast<double>(supports.back().size());
  }
  if (states > static_cast<double>(kEnumerationCap)) {
    throw ValidationError("exact_tail_enumerate: state space has " +
                          std::to_string(states) + " outcomes, above the cap of " +
                          std::to_string(kEnumerationCap));
  }
  const double mean = exact_mean(a, sigmas_of(dists));
  Enumerator e(a, supports, t_grid, mean);
  e.walk(0, 0.0, 1.0);

  const std::size_t m = t_grid.size();
  std::vector<double> tails(m);
  double suffix = 0.0;
  for (std::size_t j = m; j-- > 0;) {
    suffix += e.mass[j + 1];
    tails[j] = suffix;
  }
  return tails;
}

double empirical_quantile(const SquareMatrix& a, const std::vector<DistributionSpec>& dists,
                          const SimConfig& cfg, double x, unsigned workers) {
  const auto ests = empirical_quantiles_with_confidence(a, dists, cfg, {x}, workers);
  return ests.front().quantile;
}

std::vector<QuantileEstimate> empirical_quantiles_with_confidence(
    const SquareMatrix& a, const std::vector<DistributionSpec>& dists,
    const SimConfig& cfg, const std::vector<double>& x_grid, unsigned workers) {
  require_increasing(x_grid, "empirical_quantiles");
  for (double x : x_grid) {
    if (!(x > 0.0)) throw ValidationError("empirical_quantiles: x must be > 0");
  }
  std::vector<double> values = sample_centered_values(a, dists, cfg, workers);
  std::sort(values.begin(), values.end());
  const std::uint64_t n = cfg.sample_count;
  std::vector<QuantileEstimate> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    QuantileEstimate q;
    q.x = x;
    q.prob = 1.0 - std::exp(-x);
    q.quantile = values[quantile_rank(n, q.prob) - 1];
    q.ucb = values[quantile_ucb_rank(n, q.prob, cfg.confidence) - 1];
    out.push_back(q);
  }
  return out;
}

CompareReport compare_bounds(const SquareMatrix& a, const std::vector<DistributionSpec>& dists,
                             const SimConfig& cfg, const std::vector<double>& x_grid,
                             std::optional<double> k, double hw_constant_c,
                             unsigned workers) {
  require_dims(a, dists.size());
  CompareReport report;
  const SigmaDiag sig = sigmas_of(dists);
  report.norms = scaled_norm_stats(a, sig);
  report.degenerate = report.norms.hs == 0.0;
  report.hw_constant_c = hw_constant_c;
  report.all_gaussian = std::all_of(dists.begin(), dists.end(),
                                    [](const DistributionSpec& d) { return d.is_gaussian(); });
  if (k.has_value()) {
    report.k = *k;
    report.k_auto = false;
  } else {
    report.k_auto = true;
    double kmax = 0.0;
    for (const auto& d : dists) {
      const double ki = minimal_k(d).value;
      report.per_coordinate_k.push_back(ki);
      kmax = std::max(kmax, ki);
    }
    report.k = kmax;
  }

  const BoundInputs inputs(report.norms, report.k, hw_constant_c);
  const auto quantiles =
      empirical_quantiles_with_confidence(a, dists, cfg, x_grid, workers);
  report.rows.reserve(x_grid.size());
  for (const auto& q : quantiles) {
    CompareRow row;
    row.x = q.x;
    row.quantile = q.quantile;
    row.quantile_ucb = q.ucb;
    row.bernstein = bernstein_deviation(inputs, q.x);
    row.hanson_wright = hanson_wright_deviation(inputs, q.x);
    row.gaussian_chaos = report.all_gaussian
                             ? gaussian_chaos_deviation(report.norms, q.x)
                             : std::numeric_limits<double>::quiet_NaN();
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace quadconc
