#include <doctest.h>

#include <algorithm>

#include "gsa/correlate.hpp"
#include "gsa/design.hpp"
#include "gsa/error.hpp"

using namespace gsa;
using Idx = Eigen::Index;

TEST_CASE("average ranks share ties") {
  const std::vector<double> x{10, 20, 10, 5, 20, 20};
  CHECK(average_ranks(x) == std::vector<double>{2.5, 5, 2.5, 1, 5, 5});
}

TEST_CASE("pearson and spearman") {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10}, z{1, 8, 27, 64, 125}, c{3, 3, 3, 3, 3};
  CHECK(pearson(x, y) == doctest::Approx(1.0));
  CHECK(pearson(x, z) < 1.0);
  CHECK(spearman(x, z) == doctest::Approx(1.0));
  CHECK(std::isnan(pearson(x, c)));
}

TEST_CASE("iman conover preserves marginals") {
  const auto s = lhs_design(3, 400, 7);
  const Matrix target{{1, 0.6, -0.3}, {0.6, 1, 0}, {-0.3, 0, 1}};
  const Matrix out = iman_conover(s.unit, target, 7);
  for (Idx j = 0; j < 3; ++j) {
    std::vector<double> a(s.unit.col(j).begin(), s.unit.col(j).end());
    std::vector<double> b(out.col(j).begin(), out.col(j).end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  const Matrix m = measured_spearman(out);
  CHECK(m(0, 1) == doctest::Approx(0.6).epsilon(0.1));
  CHECK(m(0, 2) == doctest::Approx(-0.3).epsilon(0.1));
  CHECK(std::abs(m(1, 2)) < 0.1);
}

TEST_CASE("iman conover failure modes") {
  const auto s = lhs_design(3, 50, 1);
  const Matrix npd{{1, 0.9, -0.9}, {0.9, 1, 0.9}, {-0.9, 0.9, 1}};
  try {
    iman_conover(s.unit, npd, 1);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive_definite);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(iman_conover(lhs_design(3, 3, 1).unit, Matrix::Identity(3, 3), 1), Error);
}
