#include "gsa/models.hpp"

#include <cmath>
#include <numbers>

#include "gsa/error.hpp"

namespace gsa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_uniform_on(const Distribution& d, double lo, double hi) {
  const auto* u = std::get_if<Uniform>(&d);
  return u && std::abs(u->lower - lo) <= 1e-9 * (1.0 + std::abs(lo)) &&
         std::abs(u->upper - hi) <= 1e-9 * (1.0 + std::abs(hi));
}

}  // namespace

FormulaModel make_formula_model(const std::vector<std::pair<std::string, std::string>>& outputs,
                                const std::vector<std::string>& factor_names) {
  FormulaModel m;
  for (const auto& [name, source] : outputs) {
    m.outputs.push_back({name, source, expr::BoundExpr(expr::parse(source), factor_names)});
  }
  return m;
}

std::vector<std::string> output_names(const ModelDef& model) {
  return std::visit(Overloaded{
                        [](const FormulaModel& m) {
                          std::vector<std::string> out;
                          for (const auto& o : m.outputs) out.push_back(o.name);
                          return out;
                        },
                        [](const ExternalModel& m) {
                          return m.outputs.empty() ? std::vector<std::string>{"y"} : m.outputs;
                        },
                        [](const auto&) { return std::vector<std::string>{"y"}; },
                    },
                    model);
}

bool is_internal(const ModelDef& model) { return !std::holds_alternative<ExternalModel>(model); }

std::vector<std::string> check_model(const ModelDef& model, std::size_t k) {
  std::vector<std::string> out;
  std::visit(Overloaded{
                 [&](const FormulaModel& m) {
                   if (m.outputs.empty()) out.emplace_back("formula model defines no outputs");
                 },
                 [&](const LinearModel& m) {
                   if (m.coefficients.size() != k) {
                     out.push_back("linear model has " + std::to_string(m.coefficients.size()) +
                                   " coefficients for " + std::to_string(k) + " factors");
                   }
                 },
                 [&](const IshigamiModel&) {
                   if (k < 3) out.emplace_back("ishigami model needs at least 3 factors");
                 },
                 [&](const SobolGModel& m) {
                   if (m.a.size() != k) {
                     out.push_back("sobol_g model has " + std::to_string(m.a.size()) + " coefficients for " +
                                   std::to_string(k) + " factors");
                   }
                   for (double a : m.a) {
                     if (!(a >= 0.0)) {
                       out.emplace_back("sobol_g coefficients must be >= 0");
                       break;
                     }
                   }
                 },
                 [&](const ExternalModel& m) {
                   if (m.command.empty()) out.emplace_back("external model command is empty");
                   if (m.timeout_seconds < 0.0) out.emplace_back("external timeout must be >= 0");
                   if (m.workers == 0) out.emplace_back("external worker count must be >= 1");
                 },
             },
             model);
  return out;
}

double ishigami(double x1, double x2, double x3, double a, double b) {
  const double s2 = std::sin(x2);
  const double x3_2 = x3 * x3;
  return std::sin(x1) + a * s2 * s2 + b * x3_2 * x3_2 * std::sin(x1);
}

double sobol_g(std::span<const double> x, std::span<const double> a) {
  double y = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) y *= (std::abs(4.0 * x[i] - 2.0) + a[i]) / (1.0 + a[i]);
  return y;
}

std::vector<double> evaluate(const ModelDef& model, std::span<const double> row) {
  return std::visit(
      Overloaded{
          [&](const FormulaModel& m) {
            std::vector<double> out;
            out.reserve(m.outputs.size());
            for (const auto& o : m.outputs) out.push_back(o.expr.evaluate(row));
            return out;
          },
          [&](const LinearModel& m) {
            double y = 0.0;
            for (std::size_t i = 0; i < m.coefficients.size(); ++i) y += m.coefficients[i] * row[i];
            if (!std::isfinite(y)) throw Error(Errc::evaluation, "non-finite result in linear model");
            return std::vector<double>{y};
          },
          [&](const IshigamiModel& m) {
            const double y = ishigami(row[0], row[1], row[2], m.a, m.b);
            if (!std::isfinite(y)) throw Error(Errc::evaluation, "non-finite result in ishigami model");
            return std::vector<double>{y};
          },
          [&](const SobolGModel& m) {
            const double y = sobol_g(row, m.a);
            if (!std::isfinite(y)) throw Error(Errc::evaluation, "non-finite result in sobol_g model");
            return std::vector<double>{y};
          },
          [&](const ExternalModel&) -> std::vector<double> {
            throw Error(Errc::unsupported, "external models are evaluated through the runner");
          },
      },
      model);
}

ReferenceIndices builtin_reference_indices(const ModelDef& model, const FactorSpace& space) {
  const std::size_t k = space.size();
  return std::visit(
      Overloaded{
          [&](const LinearModel& m) {
            if (m.coefficients.size() != k) throw Error(Errc::unsupported, "linear coefficients do not match k");
            if (space.correlation) throw Error(Errc::unsupported, "reference indices need independent inputs");
            std::vector<double> part(k);
            double total = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
              part[i] = m.coefficients[i] * m.coefficients[i] * variance(space.factors[i].dist);
              total += part[i];
            }
            if (!(total > 0.0)) throw Error(Errc::unsupported, "linear model has zero output variance");
            ReferenceIndices r;
            for (double p : part) r.first.push_back(p / total);
            r.total = r.first;
            return r;
          },
          [&](const IshigamiModel& m) {
            if (k != 3) throw Error(Errc::unsupported, "ishigami reference indices need exactly 3 factors");
            for (const auto& f : space.factors) {
              if (!is_uniform_on(f.dist, -std::numbers::pi, std::numbers::pi)) {
                throw Error(Errc::unsupported, "ishigami reference indices need U(-pi, pi) inputs");
              }
            }
            const double pi4 = std::pow(std::numbers::pi, 4);
            const double pi8 = pi4 * pi4;
            const double a = m.a, b = m.b;
            const double v1 = 0.5 * (1.0 + b * pi4 / 5.0) * (1.0 + b * pi4 / 5.0);
            const double v2 = a * a / 8.0;
            const double v13 = b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);
            const double v = v1 + v2 + v13;
            return ReferenceIndices{{v1 / v, v2 / v, 0.0}, {(v1 + v13) / v, v2 / v, v13 / v}};
          },
          [&](const SobolGModel& m) {
            if (m.a.size() != k) throw Error(Errc::unsupported, "sobol_g coefficients do not match k");
            for (const auto& f : space.factors) {
              if (!is_uniform_on(f.dist, 0.0, 1.0)) throw Error(Errc::unsupported, "sobol_g reference indices need U(0,1) inputs");
            }
            std::vector<double> vi(k);
            double prod = 1.0;
            for (std::size_t i = 0; i < k; ++i) {
              vi[i] = (1.0 / 3.0) / ((1.0 + m.a[i]) * (1.0 + m.a[i]));
              prod *= 1.0 + vi[i];
            }
            const double v = prod - 1.0;
            ReferenceIndices r;
            for (std::size_t i = 0; i < k; ++i) {
              r.first.push_back(vi[i] / v);
              r.total.push_back(vi[i] * (prod / (1.0 + vi[i])) / v);
            }
            return r;
          },
          [&](const auto&) -> ReferenceIndices {
            throw Error(Errc::unsupported, "reference indices exist only for the linear, ishigami and sobol_g builtins");
          },
      },
      model);
}

}  // namespace gsa
