#pragma once

#include <string>
#include <vector>

namespace gsa {

/// One scalar model output over all sample rows.  Fault rows hold NaN in `y`
/// and are listed (ascending) in `fault_rows`.
struct OutputVector {
  std::string name;
  std::vector<double> y;
  std::vector<std::size_t> fault_rows;

  std::size_t size() const { return y.size(); }
  std::size_t n_effective() const { return y.size() - fault_rows.size(); }
  /// Values of the non-fault rows, in row order.
  std::vector<double> valid_values() const;
  std::vector<bool> valid_mask() const;
};

}  // namespace gsa
