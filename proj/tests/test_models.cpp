#include <doctest.h>

#include <boost/random/sobol.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "gsa/error.hpp"
#include "gsa/models.hpp"

using namespace gsa;

namespace {

constexpr double kPi = std::numbers::pi;

// Nested quasi-Monte Carlo: outer points fix the conditioning factors, inner
// points integrate over the rest.  Returns Var(E[Y | X_S]) / Var(Y) and
// E[Var(Y | X_~S)] / Var(Y) type quantities depending on `inner_mean`.
struct Nested {
  std::size_t k;
  std::function<double(const std::vector<double>&)> f;  // unit inputs

  // Var over outer points of the inner mean, where `fixed` marks the outer
  // coordinates.  With 1000 x 1000 points this is 10^6 evaluations.
  std::pair<double, double> conditional(const std::vector<bool>& fixed, std::size_t outer, std::size_t inner) const {
    std::size_t nf = 0;
    for (bool b : fixed) nf += b;
    boost::random::sobol_engine<std::uint32_t, 32> go(nf), gi(k - nf);
    std::vector<std::uint32_t> po(nf), pi(k - nf);
    std::vector<double> x(k);
    double sum_mean = 0, sum_mean2 = 0, sum_var = 0, total = 0, total2 = 0;
    for (std::size_t o = 0; o < outer; ++o) {
      go.generate(po.begin(), po.end());
      gi.seed();
      double s = 0, s2 = 0;
      for (std::size_t i = 0; i < inner; ++i) {
        gi.generate(pi.begin(), pi.end());
        std::size_t a = 0, b = 0;
        for (std::size_t d = 0; d < k; ++d) x[d] = (fixed[d] ? po[a++] : pi[b++]) / 4294967296.0;
        const double y = f(x);
        s += y;
        s2 += y * y;
      }
      const double m = s / static_cast<double>(inner);
      sum_mean += m;
      sum_mean2 += m * m;
      sum_var += s2 / static_cast<double>(inner) - m * m;
      total += s;
      total2 += s2;
    }
    const double n = static_cast<double>(outer * inner);
    const double V = total2 / n - (total / n) * (total / n);
    const double om = sum_mean / static_cast<double>(outer);
    const double var_of_mean = sum_mean2 / static_cast<double>(outer) - om * om;
    const double mean_of_var = sum_var / static_cast<double>(outer);
    return {var_of_mean / V, mean_of_var / V};
  }
};

double ishigami_unit(const std::vector<double>& u) {
  return ishigami(-kPi + 2 * kPi * u[0], -kPi + 2 * kPi * u[1], -kPi + 2 * kPi * u[2], 7.0, 0.1);
}

FactorSpace pi_cube(std::size_t k) {
  FactorSpace s;
  for (std::size_t i = 0; i < k; ++i) s.factors.push_back({"x" + std::to_string(i + 1), Uniform{-kPi, kPi}});
  return s;
}

}  // namespace

// Closed forms for a = 7, b = 0.1 frozen from an independent computation:
// V = 13.844587940719254, S1 = 0.31390519114781146, S2 = 0.4424111447900409,
// ST3 = 0.2436836640621477.
TEST_CASE("ishigami closed form agrees with brute force") {
  const auto ref = builtin_reference_indices(IshigamiModel{}, pi_cube(3));
  CHECK(ref.first[0] == doctest::Approx(0.31390519114781146).epsilon(1e-12));
  CHECK(ref.first[1] == doctest::Approx(0.4424111447900409).epsilon(1e-12));
  CHECK(ref.first[2] == doctest::Approx(0.0));
  CHECK(ref.total[2] == doctest::Approx(0.2436836640621477).epsilon(1e-12));
  CHECK(ref.total[0] == doctest::Approx(0.5575888552099592).epsilon(1e-12));

  const Nested nest{3, ishigami_unit};
  CHECK(nest.conditional({true, false, false}, 1000, 1000).first == doctest::Approx(ref.first[0]).epsilon(0.01));
  CHECK(nest.conditional({false, true, false}, 1000, 1000).first == doctest::Approx(ref.first[1]).epsilon(0.01));
  CHECK(std::abs(nest.conditional({false, false, true}, 1000, 1000).first) < 0.005);
  CHECK(nest.conditional({true, true, false}, 1000, 1000).second == doctest::Approx(ref.total[2]).epsilon(0.01));
}

TEST_CASE("sobol g closed form agrees with brute force") {
  const std::vector<double> a{0, 0.5, 3, 9, 99, 99};
  FactorSpace unit;
  for (int i = 0; i < 6; ++i) unit.factors.push_back({"x" + std::to_string(i), Uniform{0, 1}});
  const auto ref = builtin_reference_indices(SobolGModel{a}, unit);
  // Frozen: V = 0.5680709251532503.
  CHECK(ref.first[0] == doctest::Approx(0.5867811897667689).epsilon(1e-12));
  CHECK(ref.first[1] == doctest::Approx(0.2607916398963417).epsilon(1e-12));
  CHECK(ref.first[2] == doctest::Approx(0.03667382436042305).epsilon(1e-12));
  CHECK(ref.total[0] == doctest::Approx(0.6900858923250766).epsilon(1e-12));
  CHECK(ref.total[5] == doctest::Approx(9.200838536383143e-05).epsilon(1e-10));
  const Nested nest{6, [&](const std::vector<double>& u) { return sobol_g(u, a); }};
  CHECK(nest.conditional({true, false, false, false, false, false}, 1000, 1000).first ==
        doctest::Approx(ref.first[0]).epsilon(0.01));
  CHECK(nest.conditional({false, true, false, false, false, false}, 1000, 1000).first ==
        doctest::Approx(ref.first[1]).epsilon(0.02));
}

TEST_CASE("linear reference indices") {
  FactorSpace s;
  s.factors = {{"a", Uniform{0, 1}}, {"b", Normal{0, 2}}};
  const auto ref = builtin_reference_indices(LinearModel{{2.0, 1.0}}, s);
  const double v1 = 4.0 / 12.0, v2 = 4.0;
  CHECK(ref.first[0] == doctest::Approx(v1 / (v1 + v2)));
  CHECK(ref.total[1] == doctest::Approx(v2 / (v1 + v2)));
}

TEST_CASE("evaluate builtins and formulas") {
  const std::vector<double> row{0.3, -1.2, 2.0};
  CHECK(evaluate(IshigamiModel{}, row)[0] ==
        doctest::Approx(std::sin(0.3) + 7 * std::pow(std::sin(-1.2), 2) + 0.1 * 16 * std::sin(0.3)));
  CHECK(evaluate(LinearModel{{1, 2, 3}}, row)[0] == doctest::Approx(0.3 - 2.4 + 6));
  const auto fm = make_formula_model({{"p", "a * b"}, {"q", "a + c"}}, {"a", "b", "c"});
  const auto y = evaluate(fm, row);
  CHECK(y == std::vector<double>{0.3 * -1.2, 2.3});
  CHECK(output_names(fm) == std::vector<std::string>{"p", "q"});
  CHECK(is_internal(fm));
  CHECK_FALSE(is_internal(ExternalModel{"true"}));
  CHECK_THROWS_AS(evaluate(ExternalModel{"true"}, row), Error);
}

TEST_CASE("model checks against k") {
  CHECK_FALSE(check_model(LinearModel{{1, 2}}, 3).empty());
  CHECK_FALSE(check_model(SobolGModel{{1}}, 2).empty());
  CHECK_FALSE(check_model(IshigamiModel{}, 2).empty());
  CHECK(check_model(IshigamiModel{}, 3).empty());
  CHECK_FALSE(check_model(ExternalModel{""}, 3).empty());
  CHECK_THROWS_AS(builtin_reference_indices(IshigamiModel{}, pi_cube(4)), Error);
}
