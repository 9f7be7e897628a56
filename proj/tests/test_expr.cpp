#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsa/error.hpp"
#include "gsa/expr.hpp"

using namespace gsa;
using namespace gsa::expr;

namespace {

double eval(const std::string& src, const std::vector<std::string>& names = {},
            const std::vector<double>& row = {}) {
  return BoundExpr(parse(src), names).evaluate(row);
}

// Random well-formed formula over x, y, z.
std::string random_formula(std::mt19937& g, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  switch (pick(g)) {
    case 0: return std::to_string(std::uniform_int_distribution<int>(0, 99)(g)) + ".25";
    case 1: return std::string(1, "xyz"[std::uniform_int_distribution<int>(0, 2)(g)]);
    case 2: return "-" + random_formula(g, depth - 1);
    case 3: return "(" + random_formula(g, depth - 1) + ")";
    case 4: return "sin(" + random_formula(g, depth - 1) + ")";
    case 5: return "max(" + random_formula(g, depth - 1) + ", " + random_formula(g, depth - 1) + ")";
    case 6: return random_formula(g, depth - 1) + "^" + random_formula(g, depth - 1);
    default: {
      const char* ops[] = {" + ", " - ", " * ", " / "};
      return random_formula(g, depth - 1) + ops[std::uniform_int_distribution<int>(0, 3)(g)] +
             random_formula(g, depth - 1);
    }
  }
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("1 + 2 * 3") == 7);
  CHECK(eval("(1 + 2) * 3") == 9);
  CHECK(eval("2 ^ 3 ^ 2") == 512);
  CHECK(eval("-2 ^ 2") == -4);
  CHECK(eval("2 ^ -1") == 0.5);
  CHECK(eval("8 / 4 / 2") == 1);
  CHECK(eval("10 - 4 - 3") == 3);
  CHECK(eval("1.5e2 + .5") == 150.5);
  CHECK(eval("max(1, 3) + min(4, 2) + pow(2, 3)") == 13);
  CHECK(eval("abs(-3) + sqrt(16) + ln(exp(2)) + log10(1000)") == doctest::Approx(12));
  CHECK(eval("sin(x) * cos(y) + tan(z) + asin(1)", {"x", "y", "z"}, {0.3, 0.2, 0.1}) ==
        doctest::Approx(std::sin(0.3) * std::cos(0.2) + std::tan(0.1) + std::numbers::pi / 2));
}

TEST_CASE("syntax errors carry offsets") {
  auto offset_of = [](const std::string& src) -> std::size_t {
    try {
      parse(src);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return 9999;
  };
  CHECK(offset_of("1 + * 2") == 4);
  CHECK(offset_of("(1 + 2") == 6);
  CHECK(offset_of("foo(1)") == 0);
  CHECK(offset_of("sin(1, 2)") != 9999);
  CHECK(offset_of("1 2") == 2);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("3 $ 4") == 2);
}

TEST_CASE("unknown factor at bind time") {
  try {
    BoundExpr(parse("a + b"), {"a"});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config);
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
  }
}

TEST_CASE("math faults name the subexpression") {
  const std::vector<std::string> names{"x"};
  auto message = [&](const std::string& src, double x) {
    try {
      eval(src, names, {x});
    } catch (const Error& e) {
      CHECK(e.code() == Errc::evaluation);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("1 / x", 0).find("(1 / x)") != std::string::npos);
  CHECK(message("ln(x)", -1).find("ln(x)") != std::string::npos);
  CHECK_FALSE(message("sqrt(x)", -1).empty());
  CHECK_FALSE(message("asin(x)", 2).empty());
  CHECK_FALSE(message("exp(x)", 1000).empty());
  CHECK(message("ln(x)", 2).empty());
}

TEST_CASE("print and reparse gives an equal tree") {
  const std::vector<std::string> fixed{
      "x", "-x", "x + y * z", "(x + y) * z", "x ^ y ^ z", "-x ^ 2", "x / y / z", "x - (y - z)",
      "sin(x) + cos(y)", "max(x, min(y, z))", "pow(x, 2) * 3", "1e-3 * x", "0.1 + 0.2", "--x", "+x",
      "abs(x - y) / (1 + z)", "exp(-x * x / 2)", "sqrt(x * x + y * y)", "log10(x) + ln(y)",
      "x * 0.30000000000000004"};
  std::vector<std::string> all = fixed;
  std::mt19937 g(42);
  while (all.size() < 250) all.push_back(random_formula(g, 5));
  for (const auto& src : all) {
    CAPTURE(src);
    const Expr e = parse(src);
    const std::string printed = e.to_string();
    const Expr again = parse(printed);
    CHECK(again == e);
    CHECK(again.to_string() == printed);
  }
}

TEST_CASE("arbitrary input never crashes the parser") {
  std::mt19937 g(7);
  const std::string alphabet = "xyz0123456789.e+-*/^(), sincomaxpw\t$";
  int parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string s(std::uniform_int_distribution<int>(0, 24)(g), ' ');
    for (auto& c : s) c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(g)];
    try {
      const Expr e = parse(s);
      CHECK(parse(e.to_string()) == e);
      ++parsed;
    } catch (const ParseError& e) {
      CHECK(e.offset() <= s.size());
    }
  }
  CHECK(parsed > 0);
  CHECK_THROWS_AS(parse(std::string(5000, '(') + "1" + std::string(5000, ')')), ParseError);
}

TEST_CASE("variables in first-use order") {
  CHECK(parse("b + a * b + sin(c)").variables() == std::vector<std::string>{"b", "a", "c"});
}
