#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <span>

namespace gsa {

// Sample designs are stored row-major so that one row is one model input.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using Seed = std::uint64_t;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

}  // namespace gsa
