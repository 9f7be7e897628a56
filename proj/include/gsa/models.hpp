#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gsa/distributions.hpp"
#include "gsa/expr.hpp"

namespace gsa {

struct NamedFormula {
  std::string name;
  std::string source;
  expr::BoundExpr expr;
};

struct FormulaModel {
  std::vector<NamedFormula> outputs;
};

/// y = sum c_i x_i
struct LinearModel {
  std::vector<double> coefficients;
};

/// y = sin x1 + a sin^2 x2 + b x3^4 sin x1, canonically over U(-pi, pi)^3.
struct IshigamiModel {
  double a = 7.0;
  double b = 0.1;
};

/// y = prod (|4 x_i - 2| + a_i) / (1 + a_i), canonically over U(0,1)^k.
struct SobolGModel {
  std::vector<double> a;
};

enum class ExternalMode { batch, per_row };

/// Invoked as `<command> <sample_file> <output_file>`.
struct ExternalModel {
  std::string command;
  ExternalMode mode = ExternalMode::batch;
  std::vector<std::string> outputs;
  double timeout_seconds = 0.0;  // 0 = wait indefinitely
  std::size_t workers = 1;       // per-row mode only
  std::string working_directory;  // empty = inherit; load_config() uses the config's directory
};

using ModelDef = std::variant<FormulaModel, LinearModel, IshigamiModel, SobolGModel, ExternalModel>;

/// Parses and binds named formulas against the factor names.
FormulaModel make_formula_model(const std::vector<std::pair<std::string, std::string>>& outputs,
                                const std::vector<std::string>& factor_names);

std::vector<std::string> output_names(const ModelDef& model);
bool is_internal(const ModelDef& model);

/// Problems binding `model` to a space of `k` factors; empty when usable.
std::vector<std::string> check_model(const ModelDef& model, std::size_t k);

/// Evaluates an internal model on one row of factor values.  Throws
/// Error(Errc::evaluation) on math faults, Errc::unsupported for external models.
std::vector<double> evaluate(const ModelDef& model, std::span<const double> row);

double ishigami(double x1, double x2, double x3, double a, double b);
double sobol_g(std::span<const double> x, std::span<const double> a);

struct ReferenceIndices {
  std::vector<double> first;
  std::vector<double> total;
};

/// Closed-form first-order and total indices for the builtin models over
/// their canonical inputs (linear: any independent inputs).
ReferenceIndices builtin_reference_indices(const ModelDef& model, const FactorSpace& space);

}  // namespace gsa
