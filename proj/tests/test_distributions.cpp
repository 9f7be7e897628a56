#include <doctest.h>

#include <cmath>

#include "gsa/distributions.hpp"
#include "gsa/error.hpp"

using namespace gsa;

// Reference values below were produced with scipy.stats and frozen.

TEST_CASE("normal quantile and cdf") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(normal_quantile(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-13));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_cdf(-3.0) == doctest::Approx(0.0013498980316300933).epsilon(1e-12));
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
  CHECK_THROWS_AS(normal_quantile(1.5), Error);
}

TEST_CASE("quantiles match reference values") {
  const TruncNormal tn{1.0, 2.0, 0.0, 3.0};
  CHECK(quantile(tn, 0.25) == doctest::Approx(0.7068783609147133).epsilon(1e-12));
  CHECK(cdf(tn, 2.0) == doctest::Approx(0.7186932107354801).epsilon(1e-12));
  CHECK(mean(tn) == doctest::Approx(1.4132624361230661).epsilon(1e-12));
  CHECK(variance(tn) == doctest::Approx(0.6910930363459724).epsilon(1e-10));

  const LogNormal ln{1.0, 0.5};
  CHECK(quantile(ln, 0.9) == doctest::Approx(5.159170355622591).epsilon(1e-12));
  CHECK(mean(ln) == doctest::Approx(3.080216848918031).epsilon(1e-13));
  CHECK(variance(ln) == doctest::Approx(2.694758124344946).epsilon(1e-12));

  const Triangular tr{0.0, 1.0, 4.0};
  CHECK(quantile(tr, 0.1) == doctest::Approx(0.6324555320336759).epsilon(1e-14));
  CHECK(quantile(tr, 0.8) == doctest::Approx(2.450806661517033).epsilon(1e-14));
  CHECK(variance(tr) == doctest::Approx(0.7222222222222222).epsilon(1e-14));

  const Beta be{2.0, 5.0, 1.0, 3.0};
  CHECK(quantile(be, 0.5) == doctest::Approx(1.52889996659132).epsilon(1e-12));
  CHECK(quantile(be, 0.95) == doctest::Approx(2.163606818504052).epsilon(1e-12));
  CHECK(cdf(be, 1.5) == doctest::Approx(0.466064453125).epsilon(1e-13));
  CHECK(mean(be) == doctest::Approx(1.5714285714285714).epsilon(1e-14));
  CHECK(variance(be) == doctest::Approx(0.10204081632653061).epsilon(1e-13));

  const LogUniform lu{1.0, 100.0};
  CHECK(quantile(lu, 0.5) == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(mean(lu) == doctest::Approx(21.497576854210976).epsilon(1e-13));
  CHECK(variance(lu) == doctest::Approx(623.4818205349461).epsilon(1e-12));
}

TEST_CASE("quantile inverts cdf for continuous families") {
  const std::vector<Distribution> ds{Uniform{-2, 5},     LogUniform{0.1, 10}, Normal{3, 2},
                                     TruncNormal{0, 1, -0.5, 2}, LogNormal{0, 1}, Triangular{1, 1, 3},
                                     Beta{0.5, 0.5, 0, 1}};
  for (const auto& d : ds) {
    CAPTURE(family_name(d));
    for (double p = 0.01; p < 1.0; p += 0.07) CHECK(cdf(d, quantile(d, p)) == doctest::Approx(p).epsilon(1e-9));
    CHECK(check(d).empty());
    CHECK(is_continuous(d));
  }
}

TEST_CASE("discrete weighted is right-continuous") {
  const auto d = DiscreteWeighted::make({3.0, 1.0, 2.0, 1.0}, {1.0, 1.0, 2.0, 1.0});
  REQUIRE(d.values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(d.weights[0] == doctest::Approx(0.4));
  CHECK(quantile(Distribution{d}, 0.0) == 1.0);
  CHECK(quantile(Distribution{d}, 0.39) == 1.0);
  CHECK(quantile(Distribution{d}, 0.41) == 2.0);
  CHECK(quantile(Distribution{d}, 0.99) == 3.0);
  CHECK(cdf(Distribution{d}, 2.5) == doctest::Approx(0.8));
  CHECK_FALSE(is_continuous(Distribution{d}));
  CHECK(mean(Distribution{d}) == doctest::Approx(0.4 + 0.8 + 0.6));
}

TEST_CASE("invalid parameters are reported") {
  CHECK_FALSE(check(Uniform{2, 1}).empty());
  CHECK_FALSE(check(Normal{0, -1}).empty());
  CHECK_FALSE(check(LogUniform{0, 1}).empty());
  CHECK_FALSE(check(Triangular{0, 2, 1}).empty());
  CHECK_FALSE(check(Beta{0, 1, 0, 1}).empty());
  CHECK_FALSE(check(TruncNormal{0, 1, 1, 1}).empty());
  CHECK_FALSE(check(DiscreteWeighted{{1, 2}, {1}}).empty());
}

TEST_CASE("factor space validation") {
  FactorSpace s;
  s.factors = {{"a", Uniform{0, 1}}, {"b", Normal{0, 1}}, {"a", Uniform{0, 1}}};
  auto rep = validate(s);
  REQUIRE_FALSE(rep.ok());
  bool named = false;
  for (const auto& v : rep.violations) named = named || v.find("'a'") != std::string::npos;
  CHECK(named);

  s.factors.pop_back();
  CHECK(validate(s).ok());
  s.correlation = Matrix{{1.0, 0.5}, {0.4, 1.0}};
  CHECK_FALSE(validate(s).ok());
  s.correlation = Matrix{{1.0, 1.2}, {1.2, 1.0}};
  CHECK_FALSE(validate(s).ok());
  s.correlation = Matrix{{1.0, 0.3}, {0.3, 1.0}};
  CHECK(validate(s).ok());

  FactorSpace npd;
  npd.factors = {{"x", Uniform{}}, {"y", Uniform{}}, {"z", Uniform{}}};
  npd.correlation = Matrix{{1, 0.9, -0.9}, {0.9, 1, 0.9}, {-0.9, 0.9, 1}};
  CHECK_FALSE(validate(npd).ok());
}
