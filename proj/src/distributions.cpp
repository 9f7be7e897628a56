#include "gsa/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "gsa/error.hpp"

namespace gsa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Acklam's rational approximation of the standard normal quantile
// (relative error < 1.15e-9 before refinement).
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_valid(const Distribution& dist) {
  const auto problems = check(dist);
  if (!problems.empty()) {
    throw Error(Errc::parameter, family_name(dist) + ": " + problems.front());
  }
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(Errc::domain, "probability " + fmt_num(p) + " outside [0,1]");
  }
}

// Lower-tail truncated normal quantile on standardized bounds.
double trunc_std_quantile(double alpha, double beta, double p) {
  if (alpha > 0.0) {
    // Reflect into the lower tail where Phi keeps relative precision.
    return -trunc_std_quantile(-beta, -alpha, 1.0 - p);
  }
  const double fa = normal_cdf(alpha);
  const double fb = normal_cdf(beta);
  const double z = normal_quantile(fa + p * (fb - fa));
  return std::clamp(z, alpha, beta);
}

}  // namespace

DiscreteWeighted DiscreteWeighted::make(std::vector<double> values, std::vector<double> weights) {
  DiscreteWeighted d{std::move(values), std::move(weights)};
  if (!check(d).empty()) {
    return d;  // left as given so check() reports the problem
  }
  std::map<double, double> merged;
  double total = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    merged[d.values[i]] += d.weights[i];
    total += d.weights[i];
  }
  DiscreteWeighted out;
  for (const auto& [v, w] : merged) {
    out.values.push_back(v);
    out.weights.push_back(w / total);
  }
  return out;
}

std::string family_name(const Distribution& dist) {
  return std::visit(Overloaded{
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const LogUniform&) { return std::string("loguniform"); },
                        [](const Normal&) { return std::string("normal"); },
                        [](const TruncNormal&) { return std::string("truncnormal"); },
                        [](const LogNormal&) { return std::string("lognormal"); },
                        [](const Triangular&) { return std::string("triangular"); },
                        [](const Beta&) { return std::string("beta"); },
                        [](const DiscreteWeighted&) { return std::string("discrete"); },
                    },
                    dist);
}

std::vector<std::string> check(const Distribution& dist) {
  std::vector<std::string> out;
  auto finite = [&](std::initializer_list<double> xs) {
    for (double x : xs) {
      if (!std::isfinite(x)) {
        out.emplace_back("parameters must be finite");
        return false;
      }
    }
    return true;
  };
  auto bounds = [&](double lo, double hi) {
    if (!(lo < hi)) out.push_back("lower (" + fmt_num(lo) + ") must be < upper (" + fmt_num(hi) + ")");
  };
  std::visit(Overloaded{
                 [&](const Uniform& d) {
                   if (finite({d.lower, d.upper})) bounds(d.lower, d.upper);
                 },
                 [&](const LogUniform& d) {
                   if (!finite({d.lower, d.upper})) return;
                   if (!(d.lower > 0.0)) out.emplace_back("lower must be > 0");
                   bounds(d.lower, d.upper);
                 },
                 [&](const Normal& d) {
                   if (finite({d.mean, d.sd}) && !(d.sd > 0.0)) out.emplace_back("sd must be > 0");
                 },
                 [&](const TruncNormal& d) {
                   if (!finite({d.mean, d.sd, d.lower, d.upper})) return;
                   if (!(d.sd > 0.0)) out.emplace_back("sd must be > 0");
                   bounds(d.lower, d.upper);
                 },
                 [&](const LogNormal& d) {
                   if (finite({d.mu, d.sigma}) && !(d.sigma > 0.0)) out.emplace_back("sigma must be > 0");
                 },
                 [&](const Triangular& d) {
                   if (!finite({d.lower, d.mode, d.upper})) return;
                   bounds(d.lower, d.upper);
                   if (d.mode < d.lower || d.mode > d.upper) out.emplace_back("mode must lie in [lower, upper]");
                 },
                 [&](const Beta& d) {
                   if (!finite({d.alpha, d.beta, d.lower, d.upper})) return;
                   if (!(d.alpha > 0.0)) out.emplace_back("alpha must be > 0");
                   if (!(d.beta > 0.0)) out.emplace_back("beta must be > 0");
                   bounds(d.lower, d.upper);
                 },
                 [&](const DiscreteWeighted& d) {
                   if (d.values.empty()) out.emplace_back("values must be nonempty");
                   if (d.values.size() != d.weights.size()) {
                     out.emplace_back("values and weights differ in length");
                     return;
                   }
                   double total = 0.0;
                   for (double w : d.weights) {
                     if (!(w >= 0.0) || !std::isfinite(w)) {
                       out.emplace_back("weights must be finite and nonnegative");
                       return;
                     }
                     total += w;
                   }
                   for (double v : d.values) {
                     if (!std::isfinite(v)) {
                       out.emplace_back("values must be finite");
                       return;
                     }
                   }
                   if (!d.values.empty() && !(total > 0.0)) out.emplace_back("weights must not all be zero");
                 },
             },
             dist);
  return out;
}

bool is_continuous(const Distribution& dist) {
  return !std::holds_alternative<DiscreteWeighted>(dist);
}

bool is_bounded(const Distribution& dist) {
  return !(std::holds_alternative<Normal>(dist) || std::holds_alternative<LogNormal>(dist));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  require_probability(p);
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  double x = acklam(p);
  // One Halley step against the erfc-based CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double quantile(const Distribution& dist, double p) {
  require_probability(p);
  require_valid(dist);
  return std::visit(
      Overloaded{
          [&](const Uniform& d) {
            if (p == 1.0) return d.upper;
            return d.lower + p * (d.upper - d.lower);
          },
          [&](const LogUniform& d) {
            if (p == 0.0) return d.lower;
            if (p == 1.0) return d.upper;
            return std::clamp(std::exp(std::log(d.lower) + p * std::log(d.upper / d.lower)), d.lower,
                              d.upper);
          },
          [&](const Normal& d) { return d.mean + d.sd * normal_quantile(p); },
          [&](const TruncNormal& d) {
            if (p == 0.0) return d.lower;
            if (p == 1.0) return d.upper;
            const double alpha = (d.lower - d.mean) / d.sd;
            const double beta = (d.upper - d.mean) / d.sd;
            return std::clamp(d.mean + d.sd * trunc_std_quantile(alpha, beta, p), d.lower, d.upper);
          },
          [&](const LogNormal& d) {
            if (p == 0.0) return 0.0;
            return std::exp(d.mu + d.sigma * normal_quantile(p));
          },
          [&](const Triangular& d) {
            const double width = d.upper - d.lower;
            const double split = (d.mode - d.lower) / width;
            if (p <= split) return d.lower + std::sqrt(p * width * (d.mode - d.lower));
            return d.upper - std::sqrt((1.0 - p) * width * (d.upper - d.mode));
          },
          [&](const Beta& d) {
            const double z = boost::math::ibeta_inv(d.alpha, d.beta, p);
            return d.lower + z * (d.upper - d.lower);
          },
          [&](const DiscreteWeighted& d) {
            // Right-continuous: p on a cumulative boundary maps to the next value.
            double cum = 0.0;
            double total = 0.0;
            for (double w : d.weights) total += w;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              cum += d.weights[i] / total;
              if (p < cum) return d.values[i];
            }
            return d.values.back();
          },
      },
      dist);
}

double cdf(const Distribution& dist, double x) {
  require_valid(dist);
  if (std::isnan(x)) throw Error(Errc::domain, "cdf of NaN");
  return std::visit(
      Overloaded{
          [&](const Uniform& d) { return std::clamp((x - d.lower) / (d.upper - d.lower), 0.0, 1.0); },
          [&](const LogUniform& d) {
            if (x <= d.lower) return 0.0;
            if (x >= d.upper) return 1.0;
            return std::log(x / d.lower) / std::log(d.upper / d.lower);
          },
          [&](const Normal& d) { return normal_cdf((x - d.mean) / d.sd); },
          [&](const TruncNormal& d) {
            if (x <= d.lower) return 0.0;
            if (x >= d.upper) return 1.0;
            double alpha = (d.lower - d.mean) / d.sd;
            double beta = (d.upper - d.mean) / d.sd;
            double z = (x - d.mean) / d.sd;
            if (alpha > 0.0) {
              // Upper tail: work with survival functions.
              const double sa = normal_cdf(-alpha);
              const double sb = normal_cdf(-beta);
              return std::clamp((sa - normal_cdf(-z)) / (sa - sb), 0.0, 1.0);
            }
            const double fa = normal_cdf(alpha);
            const double fb = normal_cdf(beta);
            return std::clamp((normal_cdf(z) - fa) / (fb - fa), 0.0, 1.0);
          },
          [&](const LogNormal& d) {
            if (x <= 0.0) return 0.0;
            return normal_cdf((std::log(x) - d.mu) / d.sigma);
          },
          [&](const Triangular& d) {
            if (x <= d.lower) return 0.0;
            if (x >= d.upper) return 1.0;
            const double width = d.upper - d.lower;
            if (x <= d.mode) return (x - d.lower) * (x - d.lower) / (width * (d.mode - d.lower));
            return 1.0 - (d.upper - x) * (d.upper - x) / (width * (d.upper - d.mode));
          },
          [&](const Beta& d) {
            if (x <= d.lower) return 0.0;
            if (x >= d.upper) return 1.0;
            return boost::math::ibeta(d.alpha, d.beta, (x - d.lower) / (d.upper - d.lower));
          },
          [&](const DiscreteWeighted& d) {
            double total = 0.0;
            double below = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              total += d.weights[i];
              if (d.values[i] <= x) below += d.weights[i];
            }
            return std::clamp(below / total, 0.0, 1.0);
          },
      },
      dist);
}

double mean(const Distribution& dist) {
  require_valid(dist);
  return std::visit(
      Overloaded{
          [](const Uniform& d) { return 0.5 * (d.lower + d.upper); },
          [](const LogUniform& d) { return (d.upper - d.lower) / std::log(d.upper / d.lower); },
          [](const Normal& d) { return d.mean; },
          [](const TruncNormal& d) {
            const double a = (d.lower - d.mean) / d.sd;
            const double b = (d.upper - d.mean) / d.sd;
            const double z = normal_cdf(b) - normal_cdf(a);
            return d.mean + d.sd * (normal_pdf(a) - normal_pdf(b)) / z;
          },
          [](const LogNormal& d) { return std::exp(d.mu + 0.5 * d.sigma * d.sigma); },
          [](const Triangular& d) { return (d.lower + d.mode + d.upper) / 3.0; },
          [](const Beta& d) { return d.lower + (d.upper - d.lower) * d.alpha / (d.alpha + d.beta); },
          [](const DiscreteWeighted& d) {
            double s = 0.0, t = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              s += d.values[i] * d.weights[i];
              t += d.weights[i];
            }
            return s / t;
          },
      },
      dist);
}

double variance(const Distribution& dist) {
  require_valid(dist);
  return std::visit(
      Overloaded{
          [](const Uniform& d) { return (d.upper - d.lower) * (d.upper - d.lower) / 12.0; },
          [](const LogUniform& d) {
            const double l = std::log(d.upper / d.lower);
            const double m = (d.upper - d.lower) / l;
            return (d.upper * d.upper - d.lower * d.lower) / (2.0 * l) - m * m;
          },
          [](const Normal& d) { return d.sd * d.sd; },
          [](const TruncNormal& d) {
            const double a = (d.lower - d.mean) / d.sd;
            const double b = (d.upper - d.mean) / d.sd;
            const double z = normal_cdf(b) - normal_cdf(a);
            const double pa = normal_pdf(a), pb = normal_pdf(b);
            const double r = (pa - pb) / z;
            return d.sd * d.sd * (1.0 + (a * pa - b * pb) / z - r * r);
          },
          [](const LogNormal& d) {
            const double s2 = d.sigma * d.sigma;
            return std::expm1(s2) * std::exp(2.0 * d.mu + s2);
          },
          [](const Triangular& d) {
            const double a = d.lower, b = d.upper, c = d.mode;
            return (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
          },
          [](const Beta& d) {
            const double s = d.alpha + d.beta;
            const double w = d.upper - d.lower;
            return w * w * d.alpha * d.beta / (s * s * (s + 1.0));
          },
          [](const DiscreteWeighted& d) {
            double t = 0.0, s = 0.0, s2 = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              t += d.weights[i];
              s += d.values[i] * d.weights[i];
              s2 += d.values[i] * d.values[i] * d.weights[i];
            }
            const double m = s / t;
            return s2 / t - m * m;
          },
      },
      dist);
}

std::vector<std::string> FactorSpace::names() const {
  std::vector<std::string> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.name);
  return out;
}

std::optional<std::size_t> FactorSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].name == name) return i;
  }
  return std::nullopt;
}

ValidationReport validate(const FactorSpace& space) {
  ValidationReport report;
  auto& v = report.violations;
  if (space.factors.empty()) v.emplace_back("no factors defined");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < space.factors.size(); ++i) {
    const auto& f = space.factors[i];
    if (f.name.empty()) v.push_back("factor " + std::to_string(i + 1) + ": empty name");
    if (!f.name.empty() && !seen.insert(f.name).second) v.push_back("duplicate factor name '" + f.name + "'");
    for (const auto& problem : check(f.dist)) {
      v.push_back("factor '" + f.name + "' (" + family_name(f.dist) + "): " + problem);
    }
  }
  if (space.correlation) {
    const Matrix& c = *space.correlation;
    const auto k = static_cast<Eigen::Index>(space.factors.size());
    if (c.rows() != k || c.cols() != k) {
      v.push_back("correlation matrix must be " + std::to_string(k) + "x" + std::to_string(k));
    } else {
      bool shape_ok = true;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(c(i, i) - 1.0) > 1e-12) {
          v.push_back("correlation diagonal entry " + std::to_string(i + 1) + " is not 1");
          shape_ok = false;
        }
        for (Eigen::Index j = 0; j < k; ++j) {
          if (!(c(i, j) >= -1.0 && c(i, j) <= 1.0)) {
            v.push_back("correlation entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") outside [-1,1]");
            shape_ok = false;
          }
          if (j > i && std::abs(c(i, j) - c(j, i)) > 1e-12) {
            v.push_back("correlation matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ")");
            shape_ok = false;
          }
        }
      }
      if (shape_ok && Eigen::LLT<Eigen::MatrixXd>(c).info() != Eigen::Success) {
        v.emplace_back("correlation matrix is not positive definite");
      }
    }
  }
  return report;
}

}  // namespace gsa
