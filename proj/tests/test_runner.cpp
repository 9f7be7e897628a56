#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gsa/design.hpp"
#include "gsa/error.hpp"
#include "gsa/io.hpp"
#include "gsa/kernels.hpp"
#include "gsa/runner.hpp"

using namespace gsa;
namespace fs = std::filesystem;
using Idx = Eigen::Index;

namespace {

fs::path script(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "gsa_runner_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  write_text_file(p, "#!/bin/sh\n" + body);
  return p;
}

// Copies column 1 of the sample to the output; values below 0.1 fault.
const char* kEcho =
    "awk 'NR == 1 { next } /^#/ || NF == 0 { next } { if ($1 < 0.1) print \"NaN\"; else print $1 }' \"$1\" > \"$2\"\n";

}  // namespace

TEST_CASE("batch echo model reproduces column 1 with faults") {
  const auto s = random_design(2, 200, 3);
  ExternalModel m{"sh " + script("echo.sh", kEcho).string()};
  const auto res = evaluate_all(m, s.values);
  REQUIRE(res.outputs.size() == 1);
  std::size_t expected_faults = 0;
  for (Idx i = 0; i < 200; ++i) {
    if (s.values(i, 0) < 0.1) {
      ++expected_faults;
      CHECK(std::isnan(res.outputs[0].y[static_cast<std::size_t>(i)]));
    } else {
      CHECK(res.outputs[0].y[static_cast<std::size_t>(i)] == s.values(i, 0));
    }
  }
  CHECK(expected_faults > 0);
  CHECK(res.outputs[0].fault_rows.size() == expected_faults);
  CHECK(res.faults.size() == expected_faults);
}

TEST_CASE("per-row mode agrees with batch mode") {
  const auto s = random_design(2, 30, 4);
  ExternalModel batch{"sh " + script("echo.sh", kEcho).string()};
  ExternalModel per_row = batch;
  per_row.mode = ExternalMode::per_row;
  per_row.workers = 3;
  const auto a = evaluate_all(batch, s.values);
  const auto b = evaluate_all(per_row, s.values);
  CHECK(a.outputs[0].fault_rows == b.outputs[0].fault_rows);
  for (std::size_t i = 0; i < 30; ++i) {
    if (!std::isnan(a.outputs[0].y[i])) CHECK(a.outputs[0].y[i] == b.outputs[0].y[i]);
  }
}

TEST_CASE("failing external model relays stderr") {
  const auto s = random_design(1, 5, 1);
  ExternalModel m{"sh " + script("fail.sh", "echo 'license server down' >&2\nexit 1\n").string()};
  try {
    evaluate_all(m, s.values);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::external);
    const std::string msg = e.what();
    CHECK(msg.find("status 1") != std::string::npos);
    CHECK(msg.find("license server down") != std::string::npos);
  }
}

TEST_CASE("short output file is a protocol error") {
  const auto s = random_design(1, 5, 1);
  ExternalModel m{"sh " + script("short.sh", "echo 1 > \"$2\"\n").string()};
  try {
    evaluate_all(m, s.values);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::external);
    CHECK(std::string(e.what()).find("expected 5 rows") != std::string::npos);
  }
}

TEST_CASE("timeout kills the model") {
  const auto s = random_design(1, 2, 1);
  ExternalModel m{"sh " + script("slow.sh", "sleep 30\n").string()};
  m.timeout_seconds = 0.3;
  try {
    evaluate_all(m, s.values);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("timed out") != std::string::npos);
  }
}

TEST_CASE("run_external reports exit status") {
  const auto st = run_external("exit 7", "/dev/null", "/dev/null");
  CHECK(st.exit_code == 7);
  CHECK_FALSE(st.timed_out);
}

TEST_CASE("internal faults are per row") {
  FactorSpace space;
  space.factors = {{"x", Uniform{-1, 1}}};
  auto s = random_design(1, 500, 2);
  bind(s, space);
  const auto m = make_formula_model({{"y", "ln(x)"}}, {"x"});
  const auto res = evaluate_all(m, s.values);
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(std::isnan(res.outputs[0].y[i]) == (s.values(static_cast<Idx>(i), 0) <= 0));
  }
  CHECK(res.faults.size() == res.outputs[0].fault_rows.size());
  CHECK(std::is_sorted(res.outputs[0].fault_rows.begin(), res.outputs[0].fault_rows.end()));
}

TEST_CASE("parallel row evaluation equals the serial reference") {
  const auto s = random_design(3, 5000, 9);
  const kernels::RowFunction fn = [](std::span<const double> r, std::span<double> out) {
    if (r[0] < 0.01) throw Error(Errc::evaluation, "fault");
    out[0] = std::sin(r[0]) * r[1] + r[2];
    out[1] = r[0] * r[0];
  };
  Matrix a(5000, 2), b(5000, 2);
  std::vector<kernels::RowFault> fa, fb;
  kernels::evaluate_rows_serial(fn, s.unit, a, fa);
  kernels::evaluate_rows(fn, s.unit, b, fb, 4);
  REQUIRE(fa.size() == fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa[i].row == fb[i].row);
  for (Idx i = 0; i < 5000; ++i) {
    for (Idx j = 0; j < 2; ++j) {
      CHECK((a(i, j) == b(i, j) || (std::isnan(a(i, j)) && std::isnan(b(i, j)))));
    }
  }
}

TEST_CASE("non-math errors escape the parallel kernel unchanged") {
  const auto s = random_design(1, 100, 9);
  const kernels::RowFunction fn = [](std::span<const double> r, std::span<double> out) {
    if (r[0] > 0.5) throw Error(Errc::io, "disk");
    out[0] = r[0];
  };
  Matrix y(100, 1);
  std::vector<kernels::RowFault> faults;
  try {
    kernels::evaluate_rows(fn, s.unit, y, faults, 2);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
}

TEST_CASE("fourier power parallel equals serial and matches a pure tone") {
  const std::size_t n = 1027;
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = 3.0 * std::cos(2 * M_PI * 5.0 * static_cast<double>(j) / n) + 1.0;
  std::vector<std::size_t> f(200);
  for (std::size_t p = 0; p < f.size(); ++p) f[p] = p + 1;
  const auto a = kernels::fourier_power_serial(y, f);
  const auto b = kernels::fourier_power(y, f, 3);
  CHECK(a == b);
  CHECK(a[4] == doctest::Approx(2.25));  // (3/2)^2
  CHECK(std::abs(a[5]) < 1e-20);
}
