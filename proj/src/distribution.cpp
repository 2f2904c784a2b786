#include "quadconc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "quadconc/errors.hpp"
#include "quadconc/quadrature.hpp"

namespace quadconc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbTol = 1e-12;

// Quadrature window: +-40 standard deviations covers every catalog density
// far past the 1e-18 relative floor.
constexpr double kSigmaWindow = 40.0;
// Half-width (in sigmas) past an integrand peak at which exp(-w^2/2) has
// fallen below 1e-18.
constexpr double kPeakWindow = 13.0;

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

DistributionSpec::DistributionSpec(Kind kind) : kind_(std::move(kind)) {
  if (const auto* g = std::get_if<Gaussian>(&kind_)) {
    require(std::isfinite(g->sigma) && g->sigma > 0.0,
            "gaussian sigma must be finite and > 0");
  } else if (const auto* u = std::get_if<UniformSymmetric>(&kind_)) {
    require(std::isfinite(u->half_width) && u->half_width > 0.0,
            "uniform half_width must be finite and > 0");
  } else if (const auto* r = std::get_if<Rademacher>(&kind_)) {
    require(std::isfinite(r->scale) && r->scale > 0.0,
            "rademacher scale must be finite and > 0");
  } else {
    const auto& f = std::get<FiniteDiscrete>(kind_);
    require(!f.values.empty(), "finite_discrete needs at least one atom");
    require(f.values.size() == f.probs.size(),
            "finite_discrete values/probs lengths differ");
    double psum = 0.0, mean = 0.0, vmax = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      require(std::isfinite(f.values[i]), "finite_discrete values must be finite");
      require(std::isfinite(f.probs[i]) && f.probs[i] >= 0.0,
              "finite_discrete probs must be finite and >= 0");
      psum += f.probs[i];
      mean += f.probs[i] * f.values[i];
      vmax = std::max(vmax, std::abs(f.values[i]));
    }
    require(std::abs(psum - 1.0) <= kProbTol, "finite_discrete probs must sum to 1");
    require(std::abs(mean) <= kProbTol * std::max(1.0, vmax),
            "finite_discrete must have zero mean");
  }
}

DistributionSpec DistributionSpec::gaussian(double sigma) {
  return DistributionSpec(Gaussian{sigma});
}
DistributionSpec DistributionSpec::uniform_symmetric(double half_width) {
  return DistributionSpec(UniformSymmetric{half_width});
}
DistributionSpec DistributionSpec::rademacher(double scale) {
  return DistributionSpec(Rademacher{scale});
}
DistributionSpec DistributionSpec::finite_discrete(std::vector<double> values,
                                                   std::vector<double> probs) {
  return DistributionSpec(FiniteDiscrete{std::move(values), std::move(probs)});
}

std::string DistributionSpec::kind_name() const {
  if (std::holds_alternative<Gaussian>(kind_)) return "gaussian";
  if (std::holds_alternative<UniformSymmetric>(kind_)) return "uniform";
  if (std::holds_alternative<Rademacher>(kind_)) return "rademacher";
  return "finite_discrete";
}

bool DistributionSpec::is_discrete() const {
  return std::holds_alternative<Rademacher>(kind_) ||
         std::holds_alternative<FiniteDiscrete>(kind_);
}

double sigma2(const DistributionSpec& d) {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return k.sigma * k.sigma;
        } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
          return k.half_width * k.half_width / 3.0;
        } else if constexpr (std::is_same_v<T, Rademacher>) {
          return k.scale * k.scale;
        } else {
          double s = 0.0;
          for (std::size_t i = 0; i < k.values.size(); ++i)
            s += k.probs[i] * k.values[i] * k.values[i];
          return s;
        }
      },
      d.kind());
}

namespace {

// (2p-1)!! in doubles; +inf past the representable range.
double odd_double_factorial(int p) {
  double v = 1.0;
  for (int m = 3; m <= 2 * p - 1; m += 2) v *= m;
  return v;
}

}  // namespace

double even_moment(const DistributionSpec& d, int p) {
  if (p < 1) throw ValidationError("even_moment requires p >= 1");
  return std::visit(
      [p](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return odd_double_factorial(p) * std::pow(k.sigma, 2.0 * p);
        } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
          return std::pow(k.half_width, 2.0 * p) / (2.0 * p + 1.0);
        } else if constexpr (std::is_same_v<T, Rademacher>) {
          return std::pow(k.scale, 2.0 * p);
        } else {
          double s = 0.0;
          for (std::size_t i = 0; i < k.values.size(); ++i)
            s += k.probs[i] * std::pow(k.values[i] * k.values[i], p);
          return s;
        }
      },
      d.kind());
}

namespace {

double gaussian_density(double sigma, double x) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

// Integrate g against the density of a continuous catalog distribution.
// `center` and `spread` bound where the integrand can be non-negligible
// beyond the density's own window.
double integrate_against_density(const DistributionSpec& d,
                                 const std::function<double(double)>& g,
                                 double center, double spread) {
  if (const auto* gau = std::get_if<Gaussian>(&d.kind())) {
    const double s = gau->sigma;
    double lo = -kSigmaWindow * s;
    double hi = kSigmaWindow * s;
    if (spread > 0.0) {
      lo = std::max(lo, center - spread);
      hi = std::min(hi, center + spread);
    }
    // Split at +-8 sigma so the first panel of the central piece has nodes
    // on the density's own scale; a sigma-width integrand bump inside a
    // 40-sigma panel can otherwise slip between all 15 Kronrod nodes and
    // fool the error estimate.
    const auto f = [&](double x) { return g(x) * gaussian_density(s, x); };
    double total = 0.0;
    double seg_lo = lo;
    for (double cut : {-8.0 * s, 8.0 * s, hi}) {
      const double seg_hi = std::min(std::max(cut, seg_lo), hi);
      if (seg_hi > seg_lo) total += integrate(f, seg_lo, seg_hi);
      seg_lo = seg_hi;
    }
    return total;
  }
  if (const auto* uni = std::get_if<UniformSymmetric>(&d.kind())) {
    const double a = uni->half_width;
    return integrate([&](double x) { return g(x) / (2.0 * a); }, -a, a);
  }
  throw ValidationError("quadrature path requires a continuous distribution");
}

double exact_sum(const FiniteDiscrete& f, const std::function<double(double)>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.probs[i] * g(f.values[i]);
  return s;
}

}  // namespace

double even_moment_quadrature(const DistributionSpec& d, int p) {
  if (p < 1) throw ValidationError("even_moment requires p >= 1");
  if (const auto* r = std::get_if<Rademacher>(&d.kind())) {
    return std::pow(r->scale, 2.0 * p);
  }
  if (const auto* f = std::get_if<FiniteDiscrete>(&d.kind())) {
    return exact_sum(*f, [p](double x) { return std::pow(x * x, p); });
  }
  return integrate_against_density(
      d, [p](double x) { return std::pow(x * x, p); }, 0.0, 0.0);
}

double mgf(const DistributionSpec& d, double s) {
  return std::visit(
      [s](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return std::exp(0.5 * s * s * k.sigma * k.sigma);
        } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
          const double u = s * k.half_width;
          if (u == 0.0) return 1.0;
          return std::sinh(u) / u;
        } else if constexpr (std::is_same_v<T, Rademacher>) {
          return std::cosh(s * k.scale);
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < k.values.size(); ++i)
            acc += k.probs[i] * std::exp(s * k.values[i]);
          return acc;
        }
      },
      d.kind());
}

double mgf_square(const DistributionSpec& d, double s) {
  return std::visit(
      [&d, s](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          const double v = k.sigma * k.sigma;
          if (2.0 * s * v >= 1.0) return kInf;  // divergent integral
          return 1.0 / std::sqrt(1.0 - 2.0 * s * v);
        } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
          // No elementary closed form; the adaptive-quadrature fallback is
          // the implementation path here.
          return integrate_against_density(
              d, [s](double x) { return std::exp(s * x * x); }, 0.0, 0.0);
        } else if constexpr (std::is_same_v<T, Rademacher>) {
          return std::exp(s * k.scale * k.scale);
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < k.values.size(); ++i)
            acc += k.probs[i] * std::exp(s * k.values[i] * k.values[i]);
          return acc;
        }
      },
      d.kind());
}

double mgf_quadrature(const DistributionSpec& d, double s) {
  if (const auto* r = std::get_if<Rademacher>(&d.kind())) {
    return std::cosh(s * r->scale);
  }
  if (const auto* f = std::get_if<FiniteDiscrete>(&d.kind())) {
    return exact_sum(*f, [s](double x) { return std::exp(s * x); });
  }
  // exp(sx) * density peaks at x = s*sigma^2 for the Gaussian; window the
  // integration there so the 1e-18 tail is kept and nothing else.
  if (const auto* g = std::get_if<Gaussian>(&d.kind())) {
    const double sg = g->sigma;
    return integrate_against_density(
        d, [s](double x) { return std::exp(s * x); }, s * sg * sg,
        kPeakWindow * sg);
  }
  return integrate_against_density(
      d, [s](double x) { return std::exp(s * x); }, 0.0, 0.0);
}

double mgf_square_quadrature(const DistributionSpec& d, double s) {
  if (const auto* r = std::get_if<Rademacher>(&d.kind())) {
    return std::exp(s * r->scale * r->scale);
  }
  if (const auto* f = std::get_if<FiniteDiscrete>(&d.kind())) {
    return exact_sum(*f, [s](double x) { return std::exp(s * x * x); });
  }
  if (const auto* g = std::get_if<Gaussian>(&d.kind())) {
    const double v = g->sigma * g->sigma;
    if (2.0 * s * v >= 1.0) return kInf;
  }
  return integrate_against_density(
      d, [s](double x) { return std::exp(s * x * x); }, 0.0, 0.0);
}

MomentTable moment_table(const DistributionSpec& d, int p_max, MomentMethod method) {
  if (p_max < 1) throw ValidationError("moment_table requires p_max >= 1");
  if (method == MomentMethod::exact_discrete && !d.is_discrete()) {
    throw ValidationError("exact_discrete moments need a discrete distribution");
  }
  MomentTable t;
  t.sigma2 = sigma2(d);
  t.method = d.is_discrete() && method != MomentMethod::quadrature
                 ? MomentMethod::exact_discrete
                 : method;
  for (int p = 1; p <= p_max; ++p) {
    t.even_moments[p] = (method == MomentMethod::quadrature)
                            ? even_moment_quadrature(d, p)
                            : even_moment(d, p);
  }
  return t;
}

double draw(const DistributionSpec& d, RandomStream& rs) {
  const double u = rs.next_unit();
  return std::visit(
      [u](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return k.sigma * normal_quantile(u);
        } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
          return k.half_width * (2.0 * u - 1.0);
        } else if constexpr (std::is_same_v<T, Rademacher>) {
          return u < 0.5 ? -k.scale : k.scale;
        } else {
          double cum = 0.0;
          for (std::size_t i = 0; i < k.values.size(); ++i) {
            cum += k.probs[i];
            if (u <= cum) return k.values[i];
          }
          return k.values.back();  // u in the roundoff sliver past cum
        }
      },
      d.kind());
}

std::vector<double> sample(const DistributionSpec& d, RandomStream& rs,
                           std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw(d, rs));
  return out;
}

std::vector<SupportAtom> discrete_support(const DistributionSpec& d) {
  if (const auto* r = std::get_if<Rademacher>(&d.kind())) {
    return {{-r->scale, 0.5}, {r->scale, 0.5}};
  }
  if (const auto* f = std::get_if<FiniteDiscrete>(&d.kind())) {
    std::vector<SupportAtom> atoms;
    atoms.reserve(f->values.size());
    for (std::size_t i = 0; i < f->values.size(); ++i)
      atoms.push_back({f->values[i], f->probs[i]});
    return atoms;
  }
  throw ValidationError("distribution '" + d.kind_name() +
                        "' has no finite support to enumerate");
}

}  // namespace quadconc
