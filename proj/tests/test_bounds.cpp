#include "quadconc/bounds.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "quadconc/errors.hpp"
#include "quadconc/matrix.hpp"
#include "quadconc/random.hpp"

using namespace quadconc;

namespace {

BoundInputs identity4_inputs(double k = 1.0, double c = 1.0) {
  const auto a = SquareMatrix::identity(4);
  return BoundInputs(scaled_norm_stats(a, SigmaDiag::ones(4)), k, c);
}

SquareMatrix random_matrix(std::size_t n, RandomStream& rs) {
  std::vector<double> e(n * n);
  for (auto& x : e) x = 2.0 * rs.next_unit() - 1.0;
  return SquareMatrix(n, std::move(e));
}

}  // namespace

TEST_CASE("BoundInputs validation") {
  NormStats ok{2.0, 1.0, 2.0, 2.0, 1.0};
  CHECK_NOTHROW(BoundInputs(ok, 1.0));
  CHECK_THROWS_AS(BoundInputs(ok, 0.0), ValidationError);
  CHECK_THROWS_AS(BoundInputs(ok, -1.0), ValidationError);
  CHECK_THROWS_AS(BoundInputs(ok, 1.0, 0.0), ValidationError);
  NormStats neg{2.0, -1.0, 2.0, 2.0, 1.0};
  CHECK_THROWS_AS(BoundInputs(neg, 1.0), ValidationError);
}

TEST_CASE("bernstein_tail oracle on the 4x4 identity") {
  // H = ||A D_sigma||_HS = 2, Op = 1, K = 1, t = 10:
  // min(100 / (192*4), 10 / 256) = 10/256, tail = exp(-10/256).
  const auto in = identity4_inputs();
  CHECK(bernstein_tail(in, 10.0) ==
        doctest::Approx(std::exp(-10.0 / 256.0)).epsilon(1e-14));
  CHECK(bernstein_tail(in, 0.0) == 1.0);

  // Small t sits on the quadratic branch: rate = t^2 / 768.
  CHECK(bernstein_tail(in, 1.0) ==
        doctest::Approx(std::exp(-1.0 / 768.0)).epsilon(1e-14));
}

TEST_CASE("zero matrix edge cases") {
  const auto z = SquareMatrix::zero(3);
  const BoundInputs in(scaled_norm_stats(z, SigmaDiag::ones(3)), 1.0);
  CHECK(bernstein_tail(in, 1.0) == 0.0);
  CHECK(bernstein_tail(in, 0.0) == 1.0);
  CHECK(hanson_wright_tail(in, 1.0) == 0.0);
  CHECK(gaussian_chaos_implied_tail(in.norms, 1.0) == 0.0);
  CHECK(bernstein_deviation(in, 1.0) == 0.0);
  CHECK_THROWS_AS(rate_function(in, 1.0), ValidationError);
  CHECK_THROWS_AS(inverse_rate(in, 1.0), ValidationError);
}

TEST_CASE("rate_function branch crossover") {
  // Branches are equal exactly at t* = (3/4) H^2 / Op; identity4 gives
  // t* = 3.
  const auto in = identity4_inputs();
  const double tstar = 0.75 * 4.0 / 1.0;
  const double var_branch = tstar * tstar / (192.0 * 4.0);
  const double lin_branch = tstar / 256.0;
  CHECK(var_branch == doctest::Approx(lin_branch).epsilon(1e-15));
  CHECK(rate_function(in, tstar) == doctest::Approx(var_branch).epsilon(1e-14));
  // Below t* the quadratic branch wins, above it the linear branch.
  CHECK(rate_function(in, 1.0) == doctest::Approx(1.0 / 768.0).epsilon(1e-14));
  CHECK(rate_function(in, 8.0) == doctest::Approx(8.0 / 256.0).epsilon(1e-14));
  CHECK(rate_function(in, 0.0) == 0.0);
}

TEST_CASE("bernstein_deviation oracle and endpoints") {
  const auto in = identity4_inputs();
  // x = 1: 256*1*1 + 8 sqrt(3) * 2 = 256 + 16 sqrt(3).
  CHECK(bernstein_deviation(in, 1.0) ==
        doctest::Approx(283.71281292110204).epsilon(1e-14));
  CHECK(bernstein_deviation(in, 0.0) == 0.0);
}

TEST_CASE("inverse_rate inverts rate_function exactly") {
  RandomStream rs(314, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = random_matrix(5, rs);
    std::vector<double> sig;
    for (int i = 0; i < 5; ++i) sig.push_back(0.2 + rs.next_unit());
    const BoundInputs in(scaled_norm_stats(a, SigmaDiag(sig)), 1.0 + rs.next_unit());
    for (double x : {1e-3, 1.0, 10.0}) {
      const double t = inverse_rate(in, x);
      CHECK(rate_function(in, t) == doctest::Approx(x).epsilon(1e-12));
    }
    // max-of-terms vs sum-of-terms sandwich.
    for (double x : {0.01, 0.5, 2.0, 25.0}) {
      const double inv = inverse_rate(in, x);
      const double dev = bernstein_deviation(in, x);
      CHECK(inv <= dev * (1.0 + 1e-15));
      CHECK(dev <= 2.0 * inv * (1.0 + 1e-15));
    }
    // Consequently tail(deviation(x)) <= exp(-x).
    for (double x : {0.1, 1.0, 4.0}) {
      CHECK(bernstein_tail(in, bernstein_deviation(in, x)) <=
            std::exp(-x) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("hanson_wright oracles") {
  const auto in = identity4_inputs();
  // ||A||_HS = 2, ||A||_op = 1, K = 1, c = 1, t = 10:
  // min(100/4, 10) = 10, tail = e^{-10}.
  CHECK(hanson_wright_tail(in, 10.0) ==
        doctest::Approx(4.5399929762484854e-05).epsilon(1e-13));
  CHECK(hanson_wright_tail(in, 0.0) == 1.0);
  // Deviation at x = 1: c (K^2 Op + K^2 HS) = 3.
  CHECK(hanson_wright_deviation(in, 1.0) == doctest::Approx(3.0).epsilon(1e-14));

  // The explicit constant scales the exponent and the deviation linearly.
  const auto in2 = identity4_inputs(1.0, 2.0);
  CHECK(hanson_wright_tail(in2, 10.0) ==
        doctest::Approx(std::exp(-20.0)).epsilon(1e-13));
  CHECK(hanson_wright_deviation(in2, 1.0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("gaussian chaos deviation and implied tail") {
  const auto a = SquareMatrix::identity(4);
  const auto sig = SigmaDiag::ones(4);
  // ||D A D||_HS = 2, ||D A D||_op = 1, x = 1: 2*2 + 2*1 = 6.
  CHECK(gaussian_chaos_deviation(a, sig, 1.0) == doctest::Approx(6.0).epsilon(1e-14));
  const auto norms = scaled_norm_stats(a, sig);
  CHECK(gaussian_chaos_implied_tail(norms, 6.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(gaussian_chaos_implied_tail(norms, 0.0) == 1.0);

  // Round trip on random instances, including heterogeneous sigma.
  RandomStream rs(2718, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto m = random_matrix(6, rs);
    std::vector<double> s;
    for (int i = 0; i < 6; ++i) s.push_back(0.1 + 2.0 * rs.next_unit());
    const auto ns = scaled_norm_stats(m, SigmaDiag(s));
    for (double x : {1e-4, 0.3, 1.0, 9.0}) {
      const double t = gaussian_chaos_deviation(ns, x);
      CHECK(gaussian_chaos_implied_tail(ns, t) ==
            doctest::Approx(std::exp(-x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("chernoff machinery regimes") {
  const auto in = identity4_inputs();
  // t* = 3 splits the regimes (same point as the rate-function crossover).
  const auto low = chernoff_machinery(in, 1.0);
  CHECK(low.regime == ChernoffRegime::unconstrained);
  CHECK(low.lambda_star == doctest::Approx(1.0 / 384.0).epsilon(1e-14));
  // Unconstrained exponent equals -t^2/(192 K^2 H^2) exactly.
  CHECK(low.exponent == doctest::Approx(-1.0 / 768.0).epsilon(1e-13));

  const auto high = chernoff_machinery(in, 10.0);
  CHECK(high.regime == ChernoffRegime::binding);
  CHECK(high.lambda_star == doctest::Approx(1.0 / 128.0).epsilon(1e-14));
  // -lambda t + 48 lambda^2 K^2 H^2 at the cap.
  const double want = -10.0 / 128.0 + 48.0 * 4.0 / (128.0 * 128.0);
  CHECK(high.exponent == doctest::Approx(want).epsilon(1e-13));
  // The binding exponent is at least as strong as the linear-branch rate.
  CHECK(high.exponent <= -10.0 / 256.0 + 1e-15);

  CHECK_THROWS_AS(chernoff_machinery(in, 0.0), ValidationError);

  // Across random instances the Chernoff exponent never exceeds minus the
  // rate function, in either regime, and lambda* respects the cap.
  RandomStream rs(99, 7);
  for (int rep = 0; rep < 40; ++rep) {
    const auto a = random_matrix(5, rs);
    std::vector<double> s;
    for (int i = 0; i < 5; ++i) s.push_back(0.2 + rs.next_unit());
    const BoundInputs bi(scaled_norm_stats(a, SigmaDiag(s)), 0.5 + rs.next_unit());
    const double t = 0.05 + 30.0 * rs.next_unit();
    const auto sol = chernoff_machinery(bi, t);
    const double cap = 1.0 / (128.0 * bi.norms.op * bi.k * bi.k);
    CHECK(sol.lambda_star <= cap * (1.0 + 1e-12));
    CHECK(sol.lambda_star > 0.0);
    CHECK(sol.exponent <= -rate_function(bi, t) + 1e-12);
  }
}

TEST_CASE("scale covariance of the tail bounds") {
  // Scaling A by c > 0 scales every norm by c, so tail(cA, ct) = tail(A, t).
  RandomStream rs(5150, 0);
  const auto a = random_matrix(4, rs);
  const auto sig = SigmaDiag::ones(4);
  const auto n1 = scaled_norm_stats(a, sig);
  const double c = 3.7;
  NormStats n2{c * n1.hs, c * n1.op, c * n1.hs_right_scaled,
               c * n1.hs_double_scaled, c * n1.op_double_scaled};
  const BoundInputs i1(n1, 1.3), i2(n2, 1.3);
  for (double t : {0.5, 2.0, 11.0}) {
    CHECK(bernstein_tail(i2, c * t) ==
          doctest::Approx(bernstein_tail(i1, t)).epsilon(1e-13));
    CHECK(hanson_wright_tail(i2, c * t) ==
          doctest::Approx(hanson_wright_tail(i1, t)).epsilon(1e-13));
    CHECK(gaussian_chaos_implied_tail(n2, c * t) ==
          doctest::Approx(gaussian_chaos_implied_tail(n1, t)).epsilon(1e-13));
  }
}

TEST_CASE("tail_bound_name identifiers") {
  CHECK(std::string(tail_bound_name(TailBoundKind::bernstein_improved)) ==
        "bernstein_improved");
  CHECK(std::string(tail_bound_name(TailBoundKind::hanson_wright)) ==
        "hanson_wright");
  CHECK(std::string(tail_bound_name(TailBoundKind::gaussian_chaos_implied)) ==
        "gaussian_chaos_implied");
}

TEST_CASE("tail_curve values, monotonicity, and validation") {
  const auto in = identity4_inputs();
  const std::vector<double> grid = {0.5, 1.0, 2.0, 5.0, 10.0, 30.0};
  for (auto which : {TailBoundKind::bernstein_improved, TailBoundKind::hanson_wright,
                     TailBoundKind::gaussian_chaos_implied}) {
    const auto curve = tail_curve(in, grid, which);
    CHECK(curve.which == which);
    REQUIRE(curve.probs.size() == grid.size());
    for (std::size_t i = 0; i < curve.probs.size(); ++i) {
      CHECK(curve.probs[i] > 0.0);
      CHECK(curve.probs[i] <= 1.0);
      if (i > 0) CHECK(curve.probs[i] <= curve.probs[i - 1]);
    }
  }
  // Spot value agreement.
  const auto bc = tail_curve(in, grid, TailBoundKind::bernstein_improved);
  CHECK(bc.probs[4] == doctest::Approx(bernstein_tail(in, 10.0)).epsilon(1e-15));

  CHECK_THROWS_AS(tail_curve(in, {}, TailBoundKind::bernstein_improved),
                  ValidationError);
  CHECK_THROWS_AS(tail_curve(in, {1.0, 1.0}, TailBoundKind::bernstein_improved),
                  ValidationError);
  CHECK_THROWS_AS(tail_curve(in, {-1.0, 2.0}, TailBoundKind::bernstein_improved),
                  ValidationError);
}

TEST_CASE("deviation_curve values and monotonicity") {
  const auto in = identity4_inputs();
  const std::vector<double> grid = {0.1, 0.5, 1.0, 4.0};
  for (auto which : {TailBoundKind::bernstein_improved, TailBoundKind::hanson_wright,
                     TailBoundKind::gaussian_chaos_implied}) {
    const auto curve = deviation_curve(in, grid, which);
    REQUIRE(curve.values.size() == grid.size());
    for (std::size_t i = 1; i < curve.values.size(); ++i)
      CHECK(curve.values[i] > curve.values[i - 1]);
  }
  const auto dc = deviation_curve(in, grid, TailBoundKind::bernstein_improved);
  CHECK(dc.values[2] == doctest::Approx(bernstein_deviation(in, 1.0)).epsilon(1e-15));
  const auto gc = deviation_curve(in, grid, TailBoundKind::gaussian_chaos_implied);
  CHECK(gc.values[2] == doctest::Approx(6.0).epsilon(1e-14));
}
