#pragma once

#include <span>
#include <string>
#include <vector>

#include "gsa/output.hpp"

namespace gsa {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double k = 0.0;  // half-width in standard deviations
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges; last bin is closed
  std::vector<std::size_t> counts;
};

struct EcdfPoint {
  double x;
  double f;
};

struct UaSummary {
  std::string name;
  std::size_t n_effective = 0;
  std::size_t n_faults = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double min = 0.0;
  double max = 0.0;
  double skewness = 0.0;  // adjusted Fisher-Pearson; 0 for constant data
  std::vector<double> probabilities;
  std::vector<double> percentiles;
  Histogram histogram;
  std::vector<EcdfPoint> ecdf;  // one point per distinct value
  double alpha = 0.05;
  double coverage = 0.95;  // 1 - alpha
  Interval tchebycheff;
  double kolmogorov_halfwidth = 0.0;
  double sign_fraction = 0.0;
};

struct UaOptions {
  std::vector<double> probabilities{0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99};
  std::size_t bins = 0;  // 0 = Sturges
  double alpha = 0.05;
};

UaSummary summarize(const OutputVector& y, const UaOptions& options = {});

/// Linear interpolation between order statistics (type 7); `sorted` ascending.
double percentile(std::span<const double> sorted, double p);

std::size_t sturges_bins(std::size_t n);
Histogram histogram(std::span<const double> values, std::size_t bins);

/// mean +- k sd with k = 1 / sqrt(1 - coverage).
Interval tchebycheff_bound(double mean, double sd, double coverage);

/// Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(2/alpha) / (2n)).
double kolmogorov_band(std::size_t n, double alpha);

/// Fraction of strictly positive values among non-fault rows.
double sign_fraction(const OutputVector& y);

/// "statistic,value" lines.
std::string to_csv(const UaSummary& s);
std::string histogram_csv(const UaSummary& s);
std::string ecdf_csv(const UaSummary& s);

}  // namespace gsa
