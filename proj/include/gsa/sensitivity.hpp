#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsa/design.hpp"
#include "gsa/models.hpp"
#include "gsa/output.hpp"
#include "gsa/runner.hpp"

namespace gsa {

/// Per-factor (or per-group) measure table.  A missing value means the
/// measure is undefined (zero output variance, faulted block, ...), which is
/// not the same claim as zero influence.
struct SaReport {
  struct Row {
    std::string name;
    std::vector<std::optional<double>> values;
  };

  std::string method;
  std::string output;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::size_t n_used = 0;
  std::size_t n_excluded = 0;
  // Goodness-of-fit and estimator notes, in emission order (R2, sum_S, ...).
  std::vector<std::pair<std::string, std::string>> info;

  std::optional<double> get(std::string_view row, std::string_view column) const;
  /// Like get() but throws when the row, column or value is missing.
  double at(std::string_view row, std::string_view column) const;
  std::optional<std::string> info_value(std::string_view key) const;
};

/// Header comment with method and sample metadata, then one row per factor.
std::string to_csv(const SaReport& report);

/// SRC, PCC, PEAR on raw values and SRRC, PRCC, SPEA on average ranks, with
/// R2 and rank R2.  Fault rows of y are dropped.
SaReport regression_measures(const Matrix& x, const OutputVector& y, const std::vector<std::string>& names);

/// mu, mu*, sigma of the elementary effects in unit coordinates.
SaReport morris_measures(const SampleMatrix& sample, const OutputVector& y, const std::vector<std::string>& names);

/// First-order (classic, extended) and total (extended) FAST indices.
SaReport fast_indices(const SampleMatrix& sample, const OutputVector& y, const std::vector<std::string>& names);

/// First-order (Saltelli 2010 form) and total (Jansen form) indices from the
/// outputs of a saltelli_design sample.
SaReport sobol_from_outputs(const SampleMatrix& sample, const OutputVector& y, const std::vector<std::string>& names);

/// Builds the two-matrix design over `space`, evaluates the model and returns
/// one report per model output.  Costs N (k + 2) evaluations.
std::vector<SaReport> sobol_indices(const ModelDef& model, const FactorSpace& space, std::size_t base_size,
                                    Seed seed, SaltelliBase base = SaltelliBase::lptau,
                                    const RunOptions& options = {});

/// Variance of equal-frequency bin means of y over the variance of y.
/// nullopt when y has zero variance.  Requires n >= 10 * bins.
std::optional<double> importance_binned(std::span<const double> x, std::span<const double> y, std::size_t bins);

/// importance_binned for every column; bins = 0 selects floor(sqrt(n)).
SaReport importance_measures(const Matrix& x, const OutputVector& y, const std::vector<std::string>& names,
                             std::size_t bins = 0);

}  // namespace gsa
