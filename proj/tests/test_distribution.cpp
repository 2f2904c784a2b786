#include "quadconc/distribution.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "quadconc/errors.hpp"
#include "quadconc/random.hpp"

using namespace quadconc;

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(DistributionSpec::gaussian(0.0), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::gaussian(-1.0), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::uniform_symmetric(0.0), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::rademacher(-2.0), ValidationError);

  // Finite discrete: probabilities must be nonnegative and sum to 1, the
  // mean must vanish, and sizes must agree.
  CHECK_THROWS_AS(DistributionSpec::finite_discrete({1.0, -1.0}, {0.5}),
                  ValidationError);
  CHECK_THROWS_AS(DistributionSpec::finite_discrete({1.0, -1.0}, {0.7, 0.7}),
                  ValidationError);
  CHECK_THROWS_AS(DistributionSpec::finite_discrete({1.0, -1.0}, {1.5, -0.5}),
                  ValidationError);
  CHECK_THROWS_AS(DistributionSpec::finite_discrete({1.0, 2.0}, {0.5, 0.5}),
                  ValidationError);  // mean 1.5 != 0
  CHECK_THROWS_AS(DistributionSpec::finite_discrete({}, {}), ValidationError);
  CHECK_NOTHROW(
      DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                        {0.1, 0.4, 0.4, 0.1}));
}

TEST_CASE("kind predicates and names") {
  CHECK(DistributionSpec::gaussian(1.0).is_gaussian());
  CHECK_FALSE(DistributionSpec::gaussian(1.0).is_discrete());
  CHECK(DistributionSpec::rademacher(1.0).is_discrete());
  CHECK_FALSE(DistributionSpec::uniform_symmetric(1.0).is_discrete());
  CHECK(DistributionSpec::finite_discrete({-1.0, 1.0}, {0.5, 0.5}).is_discrete());
  CHECK(DistributionSpec::gaussian(1.0).kind_name() == "gaussian");
  CHECK(DistributionSpec::uniform_symmetric(1.0).kind_name() == "uniform");
  CHECK(DistributionSpec::rademacher(1.0).kind_name() == "rademacher");
  CHECK(DistributionSpec::finite_discrete({-1.0, 1.0}, {0.5, 0.5}).kind_name() ==
        "finite_discrete");
}

TEST_CASE("sigma2 closed forms") {
  CHECK(sigma2(DistributionSpec::gaussian(2.0)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(sigma2(DistributionSpec::uniform_symmetric(1.0)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sigma2(DistributionSpec::rademacher(3.0)) == doctest::Approx(9.0).epsilon(1e-15));
  // Hand sum: 0.1*4 + 0.4*1 + 0.4*1 + 0.1*4 = 1.6.
  const auto fd = DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                                    {0.1, 0.4, 0.4, 0.1});
  CHECK(sigma2(fd) == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("even_moment closed-form oracles") {
  // Gaussian: E X^{2p} = (2p-1)!! sigma^{2p}.
  CHECK(even_moment(DistributionSpec::gaussian(1.0), 1) == doctest::Approx(1.0));
  CHECK(even_moment(DistributionSpec::gaussian(1.0), 2) ==
        doctest::Approx(3.0).epsilon(1e-14));
  // sigma = 2, p = 3: 5!! * 2^6 = 15 * 64 = 960.
  CHECK(even_moment(DistributionSpec::gaussian(2.0), 3) ==
        doctest::Approx(960.0).epsilon(1e-14));

  // Uniform[-a, a]: E X^{2p} = a^{2p} / (2p + 1).
  CHECK(even_moment(DistributionSpec::uniform_symmetric(1.0), 2) ==
        doctest::Approx(0.2).epsilon(1e-14));
  CHECK(even_moment(DistributionSpec::uniform_symmetric(2.0), 3) ==
        doctest::Approx(64.0 / 7.0).epsilon(1e-14));

  // Rademacher with scale s: |X|^{2p} = s^{2p} surely.
  CHECK(even_moment(DistributionSpec::rademacher(1.0), 7) == doctest::Approx(1.0));
  CHECK(even_moment(DistributionSpec::rademacher(2.0), 3) ==
        doctest::Approx(64.0).epsilon(1e-14));

  // Finite hand sum, p = 2: 0.1*16 + 0.4*1 + 0.4*1 + 0.1*16 = 4.0.
  const auto fd = DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                                    {0.1, 0.4, 0.4, 0.1});
  CHECK(even_moment(fd, 2) == doctest::Approx(4.0).epsilon(1e-14));

  CHECK_THROWS_AS(even_moment(DistributionSpec::gaussian(1.0), 0), ValidationError);
}

TEST_CASE("quadrature route agrees with closed forms") {
  const std::vector<DistributionSpec> ds = {
      DistributionSpec::gaussian(1.0), DistributionSpec::gaussian(0.3),
      DistributionSpec::uniform_symmetric(2.0),
      DistributionSpec::rademacher(1.5),
      DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                        {0.1, 0.4, 0.4, 0.1})};
  for (const auto& d : ds) {
    for (int p = 1; p <= 15; ++p) {
      const double cf = even_moment(d, p);
      const double q = even_moment_quadrature(d, p);
      CHECK(std::abs(q - cf) <= 1e-9 * std::max(1.0, std::abs(cf)));
    }
  }
}

TEST_CASE("mgf oracles") {
  // Gaussian: E e^{sX} = e^{s^2 sigma^2 / 2}; s = 1, sigma = 1 -> sqrt(e).
  CHECK(mgf(DistributionSpec::gaussian(1.0), 1.0) ==
        doctest::Approx(std::sqrt(std::exp(1.0))).epsilon(1e-14));
  // Uniform[-1,1]: sinh(s)/s at s = 1.
  CHECK(mgf(DistributionSpec::uniform_symmetric(1.0), 1.0) ==
        doctest::Approx(1.1752011936438014).epsilon(1e-13));
  // Rademacher: cosh(s).
  CHECK(mgf(DistributionSpec::rademacher(1.0), 1.0) ==
        doctest::Approx(1.5430806348152437).epsilon(1e-14));
  // Any kind at s = 0 gives exactly 1.
  CHECK(mgf(DistributionSpec::gaussian(3.0), 0.0) == 1.0);
  CHECK(mgf(DistributionSpec::uniform_symmetric(2.0), 0.0) == 1.0);
  const auto fd = DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                                    {0.1, 0.4, 0.4, 0.1});
  CHECK(mgf(fd, 0.0) == 1.0);
  // Finite hand sum at s = 1.
  const double want = 0.1 * std::exp(-2.0) + 0.4 * std::exp(-1.0) +
                      0.4 * std::exp(1.0) + 0.1 * std::exp(2.0);
  CHECK(mgf(fd, 1.0) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("mgf quadrature route agrees") {
  const std::vector<DistributionSpec> ds = {
      DistributionSpec::gaussian(0.7), DistributionSpec::uniform_symmetric(1.3),
      DistributionSpec::rademacher(2.0)};
  for (const auto& d : ds) {
    for (double s : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
      const double cf = mgf(d, s);
      CHECK(mgf_quadrature(d, s) ==
            doctest::Approx(cf).epsilon(1e-10));
    }
  }
}

TEST_CASE("mgf_square oracles") {
  // Gaussian: E e^{sX^2} = 1/sqrt(1 - 2 s sigma^2) for s < 1/(2 sigma^2).
  // s = 1/6, sigma = 1: 1/sqrt(2/3) = sqrt(1.5).
  CHECK(mgf_square(DistributionSpec::gaussian(1.0), 1.0 / 6.0) ==
        doctest::Approx(1.224744871391589).epsilon(1e-14));
  // At and past the divergence point the value is +infinity.
  CHECK(std::isinf(mgf_square(DistributionSpec::gaussian(1.0), 0.5)));
  CHECK(std::isinf(mgf_square(DistributionSpec::gaussian(2.0), 0.2)));
  // Rademacher scale s0: X^2 = s0^2 surely.
  CHECK(mgf_square(DistributionSpec::rademacher(2.0), 0.3) ==
        doctest::Approx(std::exp(0.3 * 4.0)).epsilon(1e-14));
  // Negative s is fine everywhere.
  CHECK(mgf_square(DistributionSpec::gaussian(1.0), -1.0) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));

  // Uniform[-1,1]: E e^{sX^2} = sum_k s^k / ((2k+1) k!), checked at s = 0.4
  // against a partial sum taken far past convergence.
  double series = 0.0, term_num = 1.0, fact = 1.0;
  for (int k = 0; k <= 40; ++k) {
    if (k > 0) {
      term_num *= 0.4;
      fact *= k;
    }
    series += term_num / ((2.0 * k + 1.0) * fact);
  }
  CHECK(mgf_square(DistributionSpec::uniform_symmetric(1.0), 0.4) ==
        doctest::Approx(series).epsilon(1e-12));

  // Finite hand sum.
  const auto fd = DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                                    {0.1, 0.4, 0.4, 0.1});
  const double want =
      0.2 * std::exp(0.25 * 4.0) + 0.8 * std::exp(0.25 * 1.0);
  CHECK(mgf_square(fd, 0.25) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("mgf_square quadrature route agrees") {
  CHECK(mgf_square_quadrature(DistributionSpec::gaussian(1.0), 0.2) ==
        doctest::Approx(mgf_square(DistributionSpec::gaussian(1.0), 0.2))
            .epsilon(1e-10));
  CHECK(mgf_square_quadrature(DistributionSpec::uniform_symmetric(1.0), 0.4) ==
        doctest::Approx(mgf_square(DistributionSpec::uniform_symmetric(1.0), 0.4))
            .epsilon(1e-10));
}

TEST_CASE("draws live on the support") {
  RandomStream rs(11, 0);
  const auto rad = DistributionSpec::rademacher(1.5);
  for (int i = 0; i < 200; ++i) {
    const double x = draw(rad, rs);
    CHECK((x == 1.5 || x == -1.5));
  }
  const auto uni = DistributionSpec::uniform_symmetric(2.0);
  for (int i = 0; i < 200; ++i) {
    const double x = draw(uni, rs);
    CHECK(x >= -2.0);
    CHECK(x <= 2.0);
  }
  const auto fd = DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                                    {0.1, 0.4, 0.4, 0.1});
  for (int i = 0; i < 200; ++i) {
    const double x = draw(fd, rs);
    CHECK((x == -2.0 || x == -1.0 || x == 1.0 || x == 2.0));
  }
}

TEST_CASE("empirical moments match theory within 5 standard errors") {
  const std::size_t n = 200000;
  const std::vector<DistributionSpec> ds = {
      DistributionSpec::gaussian(1.0), DistributionSpec::uniform_symmetric(1.0),
      DistributionSpec::rademacher(1.0),
      DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                        {0.1, 0.4, 0.4, 0.1})};
  for (std::size_t di = 0; di < ds.size(); ++di) {
    RandomStream rs(777, static_cast<std::uint64_t>(di));
    const auto xs = sample(ds[di], rs, n);
    for (int p = 1; p <= 3; ++p) {
      double acc = 0.0;
      for (double x : xs) acc += std::pow(std::abs(x), 2.0 * p);
      const double emp = acc / static_cast<double>(n);
      const double m = even_moment(ds[di], p);
      const double m2 = even_moment(ds[di], 2 * p);
      const double se = std::sqrt(std::max(m2 - m * m, 0.0) / static_cast<double>(n));
      CHECK(std::abs(emp - m) <= 5.0 * se + 1e-12);
    }
  }
}

TEST_CASE("each draw consumes exactly one stream word") {
  const std::vector<DistributionSpec> ds = {
      DistributionSpec::gaussian(1.0), DistributionSpec::uniform_symmetric(1.0),
      DistributionSpec::rademacher(1.0),
      DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                        {0.1, 0.4, 0.4, 0.1})};
  for (const auto& d : ds) {
    // Skipping 5 words must land on the same value as taking 5 draws first.
    RandomStream a(99, 3);
    for (int i = 0; i < 5; ++i) (void)draw(d, a);
    const double direct = draw(d, a);

    RandomStream b(99, 3);
    for (int i = 0; i < 5; ++i) (void)b.next_u64();
    CHECK(draw(d, b) == direct);
  }
}

TEST_CASE("sample is deterministic and count 0 is empty") {
  const auto d = DistributionSpec::gaussian(1.0);
  RandomStream a(5, 1), b(5, 1);
  const auto xs = sample(d, a, 100);
  const auto ys = sample(d, b, 100);
  CHECK(xs == ys);
  RandomStream c(5, 1);
  CHECK(sample(d, c, 0).empty());
}

TEST_CASE("discrete_support") {
  const auto atoms = discrete_support(DistributionSpec::rademacher(2.0));
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].value == -2.0);
  CHECK(atoms[1].value == 2.0);
  CHECK(atoms[0].prob == 0.5);
  CHECK(atoms[1].prob == 0.5);

  const auto fd = DistributionSpec::finite_discrete({-2.0, -1.0, 1.0, 2.0},
                                                    {0.1, 0.4, 0.4, 0.1});
  const auto fa = discrete_support(fd);
  REQUIRE(fa.size() == 4);
  double total = 0.0;
  for (const auto& a : fa) total += a.prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(discrete_support(DistributionSpec::gaussian(1.0)),
                  ValidationError);
  CHECK_THROWS_AS(discrete_support(DistributionSpec::uniform_symmetric(1.0)),
                  ValidationError);
}

TEST_CASE("moment_table methods agree") {
  const auto d = DistributionSpec::uniform_symmetric(1.0);
  const auto cf = moment_table(d, 8, MomentMethod::closed_form);
  const auto q = moment_table(d, 8, MomentMethod::quadrature);
  REQUIRE(cf.even_moments.size() == 8);
  REQUIRE(q.even_moments.size() == 8);
  CHECK(cf.sigma2 == doctest::Approx(q.sigma2).epsilon(1e-12));
  for (int p = 1; p <= 8; ++p) {
    CHECK(cf.even_moments.at(p) ==
          doctest::Approx(q.even_moments.at(p)).epsilon(1e-9));
  }
  const auto rad = DistributionSpec::rademacher(1.0);
  const auto ed = moment_table(rad, 4, MomentMethod::exact_discrete);
  CHECK(ed.even_moments.at(3) == doctest::Approx(1.0).epsilon(1e-15));
}
