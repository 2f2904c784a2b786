#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "quadconc/random.hpp"

namespace quadconc {

// Every catalog distribution is zero-mean by construction; FiniteDiscrete is
// validated at build time.

struct Gaussian {
  double sigma;  // > 0
};

struct UniformSymmetric {
  double half_width;  // support [-a, a], a > 0
};

struct Rademacher {
  double scale;  // values {-s, +s} with probability 1/2 each
};

struct FiniteDiscrete {
  std::vector<double> values;
  std::vector<double> probs;
};

class DistributionSpec {
 public:
  using Kind = std::variant<Gaussian, UniformSymmetric, Rademacher, FiniteDiscrete>;

  explicit DistributionSpec(Kind kind);

  static DistributionSpec gaussian(double sigma);
  static DistributionSpec uniform_symmetric(double half_width);
  static DistributionSpec rademacher(double scale);
  static DistributionSpec finite_discrete(std::vector<double> values,
                                          std::vector<double> probs);

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  bool is_gaussian() const { return std::holds_alternative<Gaussian>(kind_); }
  // True when the support is a finite set (Rademacher or FiniteDiscrete).
  bool is_discrete() const;

 private:
  Kind kind_;
};

// E[X^2].
double sigma2(const DistributionSpec& d);

// E|X|^{2p}, p >= 1, by closed form (Gaussian, uniform, Rademacher) or exact
// finite sum. Overflow for huge p is reported as +infinity, never a crash.
double even_moment(const DistributionSpec& d, int p);

// Same moment through the adaptive-quadrature path (exact sum for discrete
// kinds). Retained as an independent route for cross-checks.
double even_moment_quadrature(const DistributionSpec& d, int p);

// E exp(sX).
double mgf(const DistributionSpec& d, double s);

// E exp(sX^2); +infinity when the integral diverges (Gaussian at
// s >= 1/(2 sigma^2)).
double mgf_square(const DistributionSpec& d, double s);

// Quadrature/exact-sum routes for the two MGFs, for cross-checks.
double mgf_quadrature(const DistributionSpec& d, double s);
double mgf_square_quadrature(const DistributionSpec& d, double s);

enum class MomentMethod { closed_form, quadrature, exact_discrete };

struct MomentTable {
  double sigma2 = 0.0;
  std::map<int, double> even_moments;  // p -> E|X|^{2p}
  MomentMethod method = MomentMethod::closed_form;
};

MomentTable moment_table(const DistributionSpec& d, int p_max,
                         MomentMethod method = MomentMethod::closed_form);

// One draw; consumes exactly one 64-bit word of the stream, so draw i of a
// stream is a pure function of (seed, stream_id, i).
double draw(const DistributionSpec& d, RandomStream& rs);

std::vector<double> sample(const DistributionSpec& d, RandomStream& rs,
                           std::size_t count);

struct SupportAtom {
  double value;
  double prob;
};

// Atoms of a discrete distribution; throws ValidationError for continuous
// kinds.
std::vector<SupportAtom> discrete_support(const DistributionSpec& d);

}  // namespace quadconc
