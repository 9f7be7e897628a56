#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gsa/types.hpp"

namespace gsa {

struct Uniform {
  double lower = 0.0;
  double upper = 1.0;
};
struct LogUniform {
  double lower = 1.0;
  double upper = 10.0;
};
struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};
struct TruncNormal {
  double mean = 0.0;
  double sd = 1.0;
  double lower = -1.0;
  double upper = 1.0;
};
// Parameters are those of the underlying normal.
struct LogNormal {
  double mu = 0.0;
  double sigma = 1.0;
};
struct Triangular {
  double lower = 0.0;
  double mode = 0.5;
  double upper = 1.0;
};
// Beta(alpha, beta) rescaled onto [lower, upper].
struct Beta {
  double alpha = 1.0;
  double beta = 1.0;
  double lower = 0.0;
  double upper = 1.0;
};
// Finite support.  make() sorts by value, merges duplicates and normalizes the
// weights; a default-constructed or hand-filled instance may be invalid and is
// reported by check().
struct DiscreteWeighted {
  std::vector<double> values;
  std::vector<double> weights;

  static DiscreteWeighted make(std::vector<double> values, std::vector<double> weights);
};

using Distribution = std::variant<Uniform, LogUniform, Normal, TruncNormal, LogNormal,
                                  Triangular, Beta, DiscreteWeighted>;

/// Family name as used in configuration files ("uniform", "normal", ...).
std::string family_name(const Distribution& dist);

/// Parameter problems of a single distribution; empty when usable.
std::vector<std::string> check(const Distribution& dist);

bool is_continuous(const Distribution& dist);
bool is_bounded(const Distribution& dist);

/// Inverse CDF.  Throws Errc::domain for p outside [0,1] and Errc::parameter
/// for invalid parameters.  Unbounded variants return +-inf at p = 0 or 1.
double quantile(const Distribution& dist, double p);

double cdf(const Distribution& dist, double x);

double mean(const Distribution& dist);
double variance(const Distribution& dist);

/// Standard normal helpers shared with the rank-correlation module.
double normal_cdf(double z);
double normal_quantile(double p);

struct Factor {
  std::string name;
  Distribution dist;
};

struct FactorSpace {
  std::vector<Factor> factors;
  std::optional<Matrix> correlation;  // target Spearman matrix

  std::size_t size() const { return factors.size(); }
  std::vector<std::string> names() const;
  /// Index of `name`, or nullopt.
  std::optional<std::size_t> index_of(const std::string& name) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const FactorSpace& space);

}  // namespace gsa
