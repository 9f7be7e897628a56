#include "gsa/kernels.hpp"

#include <cmath>
#include <exception>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gsa/error.hpp"

namespace gsa::kernels {

namespace {

using Idx = Eigen::Index;

// Returns an empty string on success, the fault message otherwise.
std::string eval_one(const RowFunction& fn, const Matrix& values, Matrix& y, Idx i) {
  std::span<double> out(y.data() + i * y.cols(), static_cast<std::size_t>(y.cols()));
  try {
    fn(row_span(values, i), out);
    for (double v : out) {
      if (!std::isfinite(v)) throw Error(Errc::evaluation, "non-finite model output");
    }
    return {};
  } catch (const Error& e) {
    if (e.code() != Errc::evaluation) throw;
    for (double& v : out) v = kNaN;
    return e.what();
  }
}

struct Twiddle {
  std::vector<double> c, s;
  explicit Twiddle(std::size_t n) : c(n), s(n) {
    for (std::size_t m = 0; m < n; ++m) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
      c[m] = std::cos(a);
      s[m] = std::sin(a);
    }
  }
};

double power_at(std::span<const double> y, const Twiddle& tw, std::size_t p) {
  const std::size_t n = y.size();
  double a = 0.0, b = 0.0;
  std::size_t phase = 0;  // (p * j) mod n without overflow
  const std::size_t step = p % n;
  for (std::size_t j = 0; j < n; ++j) {
    a += y[j] * tw.c[phase];
    b += y[j] * tw.s[phase];
    phase += step;
    if (phase >= n) phase -= n;
  }
  a /= static_cast<double>(n);
  b /= static_cast<double>(n);
  return a * a + b * b;
}

}  // namespace

void evaluate_rows_serial(const RowFunction& fn, const Matrix& values, Matrix& y, std::vector<RowFault>& faults) {
  faults.clear();
  for (Idx i = 0; i < values.rows(); ++i) {
    auto msg = eval_one(fn, values, y, i);
    if (!msg.empty()) faults.push_back({static_cast<std::size_t>(i), std::move(msg)});
  }
}

void evaluate_rows(const RowFunction& fn, const Matrix& values, Matrix& y, std::vector<RowFault>& faults,
                   int threads) {
  const Idx n = values.rows();
  std::vector<std::string> messages(static_cast<std::size_t>(n));
  std::exception_ptr fatal;
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
#else
  (void)threads;
#endif
  for (Idx i = 0; i < n; ++i) {
    try {
      messages[static_cast<std::size_t>(i)] = eval_one(fn, values, y, i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(gsa_eval_fatal)
#endif
      {
        if (!fatal) fatal = std::current_exception();
      }
    }
  }
  if (fatal) std::rethrow_exception(fatal);
  faults.clear();
  for (Idx i = 0; i < n; ++i) {
    auto& m = messages[static_cast<std::size_t>(i)];
    if (!m.empty()) faults.push_back({static_cast<std::size_t>(i), std::move(m)});
  }
}

std::vector<double> fourier_power_serial(std::span<const double> y, std::span<const std::size_t> freqs) {
  const Twiddle tw(y.size());
  std::vector<double> out(freqs.size());
  for (std::size_t f = 0; f < freqs.size(); ++f) out[f] = power_at(y, tw, freqs[f]);
  return out;
}

std::vector<double> fourier_power(std::span<const double> y, std::span<const std::size_t> freqs, int threads) {
  const Twiddle tw(y.size());
  std::vector<double> out(freqs.size());
  const auto nf = static_cast<long>(freqs.size());
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#else
  (void)threads;
#endif
  for (long f = 0; f < nf; ++f) out[static_cast<std::size_t>(f)] = power_at(y, tw, freqs[static_cast<std::size_t>(f)]);
  return out;
}

}  // namespace gsa::kernels
