#include "quadconc/matrix.hpp"

#include <cmath>
#include <string>

namespace quadconc {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), a_(std::move(entries)) {
  require(n_ >= 1, "matrix dimension must be >= 1");
  require(n_ <= kMaxMatrixDim,
          "matrix dimension " + std::to_string(n_) + " exceeds cap " +
              std::to_string(kMaxMatrixDim));
  require(a_.size() == n_ * n_, "entry count " + std::to_string(a_.size()) +
                                    " does not equal n^2 = " +
                                    std::to_string(n_ * n_));
  for (double v : a_) {
    require(std::isfinite(v), "matrix entries must be finite");
  }
}

SquareMatrix SquareMatrix::zero(std::size_t n) {
  return SquareMatrix(n, std::vector<double>(n * n, 0.0));
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return SquareMatrix(n, std::move(e));
}

SigmaDiag::SigmaDiag(std::vector<double> sigmas) : s_(std::move(sigmas)) {
  require(!s_.empty(), "sigma vector must be non-empty");
  for (double v : s_) {
    require(std::isfinite(v) && v >= 0.0, "sigmas must be finite and >= 0");
  }
}

SigmaDiag SigmaDiag::ones(std::size_t n) {
  return SigmaDiag(std::vector<double>(n, 1.0));
}

double hs_norm(const SquareMatrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double op_norm(const SquareMatrix& a, double tol) {
  if (tol <= 0.0) throw ValidationError("op_norm tolerance must be > 0");
  const std::size_t n = a.dim();
  if (hs_norm(a) == 0.0) return 0.0;

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n), u(n);

  double rho_prev = -1.0;
  std::size_t restarts = 0;
  for (int it = 0; it < kOpNormMaxIter; ++it) {
    matvec(a, v, w);
    double rho = 0.0;  // Rayleigh quotient of A^T A at unit v: ||A v||^2
    for (std::size_t i = 0; i < n; ++i) rho += w[i] * w[i];
    matvec_transposed(a, w, u);
    const double unorm = norm2(u);
    if (unorm == 0.0) {
      // The start vector landed in the null space of A^T A; restart from a
      // canonical basis vector (still deterministic).
      if (restarts >= n) {
        throw NumericalError("op_norm: power iteration collapsed from every start");
      }
      std::fill(v.begin(), v.end(), 0.0);
      v[restarts++] = 1.0;
      rho_prev = -1.0;
      continue;
    }
    if (rho_prev >= 0.0 && std::abs(rho - rho_prev) <= tol * rho) {
      return std::sqrt(rho);
    }
    rho_prev = rho;
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / unorm;
  }
  throw NumericalError("op_norm: no convergence after iteration cap");
}

SquareMatrix strip_diagonal(const SquareMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> e = a.entries();
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 0.0;
  return SquareMatrix(n, std::move(e));
}

OffdiagGram offdiag_gram(const SquareMatrix& a) {
  const std::size_t n = a.dim();
  const SquareMatrix a0 = strip_diagonal(a);
  std::vector<double> b(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a0(k, i) * a0(k, j);
      b[i * n + j] = s;
    }
  }
  SquareMatrix bm(n, std::move(b));
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = bm(i, i);
  return OffdiagGram{std::move(bm), std::move(diag)};
}

SquareMatrix right_scale(const SquareMatrix& a, const SigmaDiag& sig) {
  const std::size_t n = a.dim();
  if (sig.dim() != n) throw ValidationError("sigma dimension does not match matrix");
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = a(i, j) * sig[j];
  return SquareMatrix(n, std::move(e));
}

SquareMatrix double_scale(const SquareMatrix& a, const SigmaDiag& sig) {
  const std::size_t n = a.dim();
  if (sig.dim() != n) throw ValidationError("sigma dimension does not match matrix");
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = sig[i] * a(i, j) * sig[j];
  return SquareMatrix(n, std::move(e));
}

NormStats scaled_norm_stats(const SquareMatrix& a, const SigmaDiag& sig, double tol) {
  if (sig.dim() != a.dim())
    throw ValidationError("sigma dimension does not match matrix");
  NormStats st;
  st.hs = hs_norm(a);
  st.op = op_norm(a, tol);
  st.hs_right_scaled = hs_norm(right_scale(a, sig));
  const SquareMatrix ds = double_scale(a, sig);
  st.hs_double_scaled = hs_norm(ds);
  st.op_double_scaled = op_norm(ds, tol);
  return st;
}

namespace {

void require_dim(const SquareMatrix& a, const std::vector<double>& x, const char* op) {
  if (x.size() != a.dim()) {
    throw ValidationError(std::string(op) + ": vector length " +
                          std::to_string(x.size()) + " does not match matrix dimension " +
                          std::to_string(a.dim()));
  }
}

}  // namespace

void matvec(const SquareMatrix& a, const std::vector<double>& x, std::vector<double>& y) {
  require_dim(a, x, "matvec");
  const std::size_t n = a.dim();
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

void matvec_transposed(const SquareMatrix& a, const std::vector<double>& x,
                       std::vector<double>& y) {
  require_dim(a, x, "matvec_transposed");
  const std::size_t n = a.dim();
  y.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x[j];
    for (std::size_t i = 0; i < n; ++i) y[i] += a(j, i) * xj;
  }
}

double quadratic_form(const SquareMatrix& a, const std::vector<double>& x) {
  require_dim(a, x, "quadratic_form");
  const std::size_t n = a.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
    total += x[i] * s;
  }
  return total;
}

}  // namespace quadconc
