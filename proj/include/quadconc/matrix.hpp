#pragma once

#include <cstddef>
#include <vector>

#include "quadconc/errors.hpp"

namespace quadconc {

// Dimension cap for dense storage.
inline constexpr std::size_t kMaxMatrixDim = 4096;

// Dense real n x n matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix(std::size_t n, std::vector<double> entries);

  static SquareMatrix zero(std::size_t n);
  static SquareMatrix identity(std::size_t n);

  std::size_t dim() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  const std::vector<double>& entries() const { return a_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// Per-coordinate standard deviations sigma_1..sigma_n, all finite and >= 0.
class SigmaDiag {
 public:
  explicit SigmaDiag(std::vector<double> sigmas);

  static SigmaDiag ones(std::size_t n);

  std::size_t dim() const { return s_.size(); }
  double operator[](std::size_t i) const { return s_[i]; }
  const std::vector<double>& values() const { return s_; }

 private:
  std::vector<double> s_;
};

// The five norm quantities entering the tail bounds:
//   hs                = ||A||_HS
//   op                = ||A||_op (largest singular value)
//   hs_right_scaled   = ||A D_sigma||_HS, squared value sum_ij a_ij^2 sigma_j^2
//   hs_double_scaled  = ||D_sigma A D_sigma||_HS
//   op_double_scaled  = ||D_sigma A D_sigma||_op
struct NormStats {
  double hs = 0.0;
  double op = 0.0;
  double hs_right_scaled = 0.0;
  double hs_double_scaled = 0.0;
  double op_double_scaled = 0.0;
};

// Hilbert-Schmidt (Frobenius) norm sqrt(sum_ij a_ij^2).
double hs_norm(const SquareMatrix& a);

inline constexpr double kOpNormDefaultTol = 1e-10;
inline constexpr int kOpNormMaxIter = 10000;

// Largest singular value via power iteration on A^T A, started from the
// normalized all-ones vector. Deterministic for fixed input. Throws
// NumericalError if the Rayleigh quotient has not stabilized to relative
// tolerance `tol` within the iteration cap.
double op_norm(const SquareMatrix& a, double tol = kOpNormDefaultTol);

// A with its diagonal zeroed (the matrix called A0 below).
SquareMatrix strip_diagonal(const SquareMatrix& a);

struct OffdiagGram {
  SquareMatrix b;               // B = A0^T A0
  std::vector<double> b_diag;   // b_ii = sum_{j != i} a_ji^2
};

OffdiagGram offdiag_gram(const SquareMatrix& a);

// All five norms for (A, sigma). Throws ValidationError on dimension mismatch.
NormStats scaled_norm_stats(const SquareMatrix& a, const SigmaDiag& sig,
                            double tol = kOpNormDefaultTol);

// Column-scaled product A * diag(sigma).
SquareMatrix right_scale(const SquareMatrix& a, const SigmaDiag& sig);

// D_sigma * A * D_sigma.
SquareMatrix double_scale(const SquareMatrix& a, const SigmaDiag& sig);

// y = A x. Sizes must match.
void matvec(const SquareMatrix& a, const std::vector<double>& x, std::vector<double>& y);

// y = A^T x.
void matvec_transposed(const SquareMatrix& a, const std::vector<double>& x,
                       std::vector<double>& y);

// x^T A x, direct O(n^2) evaluation.
double quadratic_form(const SquareMatrix& a, const std::vector<double>& x);

}  // namespace quadconc
