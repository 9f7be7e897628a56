#pragma once

#include <string>
#include <vector>

#include "gsa/output.hpp"
#include "gsa/types.hpp"
#include "gsa/uncertainty.hpp"

namespace gsa::plots {

// Standalone SVG documents.  Output is a pure function of the inputs.

std::string histogram_svg(const UaSummary& s);
std::string ecdf_svg(const UaSummary& s);

/// One panel per factor: factor value against output.
std::string scatter_svg(const Matrix& values, const OutputVector& y, const std::vector<std::string>& names);

/// Parallel coordinates of normalized ranks of every input and the output.
std::string cobweb_svg(const Matrix& values, const OutputVector& y, const std::vector<std::string>& names);

/// Rank data behind the cobweb plot: one row per valid sample row.
std::string cobweb_csv(const Matrix& values, const OutputVector& y, const std::vector<std::string>& names);

}  // namespace gsa::plots
