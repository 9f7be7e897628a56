#pragma once

// Data-parallel inner loops.  Each kernel has an OpenMP version and a serial
// reference with identical results; tests compare the two and the benchmark
// target times them.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gsa/types.hpp"

namespace gsa::kernels {

/// Evaluates one row into `out` (m values); throws gsa::Error on a fault.
using RowFunction = std::function<void(std::span<const double> row, std::span<double> out)>;

struct RowFault {
  std::size_t row;
  std::string message;
};

/// Results land in y (n x m, row-major); faulted rows are NaN and listed in
/// `faults` in ascending row order regardless of evaluation order.
void evaluate_rows_serial(const RowFunction& fn, const Matrix& values, Matrix& y, std::vector<RowFault>& faults);
void evaluate_rows(const RowFunction& fn, const Matrix& values, Matrix& y, std::vector<RowFault>& faults,
                   int threads = 0);

/// Power A_p^2 + B_p^2 of y at each integer frequency p over the grid
/// s_j = 2 pi j / N, where A_p = (1/N) sum y_j cos(p s_j) and B_p likewise.
std::vector<double> fourier_power_serial(std::span<const double> y, std::span<const std::size_t> freqs);
std::vector<double> fourier_power(std::span<const double> y, std::span<const std::size_t> freqs, int threads = 0);

}  // namespace gsa::kernels
