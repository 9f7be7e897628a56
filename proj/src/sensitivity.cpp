#include "gsa/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsa/correlate.hpp"
#include "gsa/error.hpp"
#include "gsa/io.hpp"
#include "gsa/kernels.hpp"

namespace gsa {

namespace {

using Idx = Eigen::Index;

std::string num(double v) { return format_number(v); }

void require_names(std::size_t k, const std::vector<std::string>& names) {
  if (names.size() != k) {
    throw Error(Errc::size, "expected " + std::to_string(k) + " factor names, got " + std::to_string(names.size()));
  }
}

void require_rows(std::size_t rows, const OutputVector& y) {
  if (y.size() != rows) {
    throw Error(Errc::size, "output '" + y.name + "' has " + std::to_string(y.size()) + " values for " +
                                std::to_string(rows) + " sample rows");
  }
}

bool degenerate(double variance, double scale) {
  return !(variance > 1e-24 * std::max(scale * scale, 1e-300));
}

// Variance about the first element, so identical inputs give exactly 0.
double shifted_variance(std::span<const double> v) {
  if (v.size() < 2) return kNaN;
  const double x0 = v[0];
  double s = 0.0, s2 = 0.0;
  for (double x : v) {
    s += x - x0;
    s2 += (x - x0) * (x - x0);
  }
  const double n = static_cast<double>(v.size());
  return std::max(0.0, (s2 - s * s / n) / (n - 1.0));
}

// --- regression ------------------------------------------------------------

struct RegressionSet {
  std::vector<std::optional<double>> coef, partial, pearson;
  std::optional<double> r2;
};

Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  const Idx n = x.rows();
  Eigen::MatrixXd z = x.rowwise() - x.colwise().mean();
  for (Idx j = 0; j < z.cols(); ++j) {
    const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0) || degenerate(sd * sd, x.col(j).cwiseAbs().maxCoeff())) {
      throw Error(Errc::collinear, "column '" + names[static_cast<std::size_t>(j)] +
                                       "' is constant and collinear with the intercept");
    }
    z.col(j) /= sd;
  }
  return z;
}

Eigen::VectorXd residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target) {
  if (basis.cols() == 0) return target;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  return target - basis * qr.solve(target);
}

RegressionSet regress(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<std::string>& names) {
  const Idx n = x.rows();
  const Idx k = x.cols();
  RegressionSet out;
  out.coef.assign(static_cast<std::size_t>(k), std::nullopt);
  out.partial = out.coef;
  out.pearson = out.coef;
  const Eigen::MatrixXd z = standardize(x, names);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
  const auto& r = qr.matrixR();
  const double scale = std::sqrt(static_cast<double>(n - 1));
  for (Idx i = 0; i < k; ++i) {
    if (std::abs(r(i, i)) / scale < 1e-10) {
      std::string cols;
      for (Idx t = i; t < k; ++t) {
        if (!cols.empty()) cols += ", ";
        cols += "'" + names[static_cast<std::size_t>(qr.colsPermutation().indices()(t))] + "'";
      }
      throw Error(Errc::collinear, "design columns are collinear; dependent column(s): " + cols);
    }
  }

  Eigen::VectorXd yc = y.array() - y.mean();
  const double syy = yc.squaredNorm();
  if (degenerate(syy / static_cast<double>(n), y.cwiseAbs().maxCoeff())) return out;  // all undefined
  const Eigen::VectorXd zy = yc / std::sqrt(syy / static_cast<double>(n - 1));

  const Eigen::VectorXd b = qr.solve(zy);
  const double sse = (zy - z * b).squaredNorm();
  out.r2 = 1.0 - sse / zy.squaredNorm();
  for (Idx j = 0; j < k; ++j) {
    out.coef[static_cast<std::size_t>(j)] = b(j);
    out.pearson[static_cast<std::size_t>(j)] = z.col(j).dot(zy) / static_cast<double>(n - 1);
    Eigen::MatrixXd others(n, k - 1);
    for (Idx t = 0, c = 0; t < k; ++t) {
      if (t != j) others.col(c++) = z.col(t);
    }
    const Eigen::VectorXd rx = residual(others, z.col(j));
    const Eigen::VectorXd ry = residual(others, zy);
    // Undefined when x_j or y carries nothing beyond the other columns.
    const double denom = std::sqrt(rx.squaredNorm() * ry.squaredNorm());
    if (ry.squaredNorm() > 1e-24 * zy.squaredNorm() && denom > 0.0) {
      out.partial[static_cast<std::size_t>(j)] = std::clamp(rx.dot(ry) / denom, -1.0, 1.0);
    }
  }
  return out;
}

Eigen::MatrixXd rank_columns(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  std::vector<double> col(static_cast<std::size_t>(x.rows()));
  for (Idx j = 0; j < x.cols(); ++j) {
    for (Idx i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
    const auto r = average_ranks(col);
    for (Idx i = 0; i < x.rows(); ++i) out(i, j) = r[static_cast<std::size_t>(i)];
  }
  return out;
}

// Rows of x and y where y is valid.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> complete_rows(const Matrix& x, const OutputVector& y) {
  const auto mask = y.valid_mask();
  const auto n = static_cast<Idx>(y.n_effective());
  Eigen::MatrixXd xs(n, x.cols());
  Eigen::VectorXd ys(n);
  Idx r = 0;
  for (Idx i = 0; i < x.rows(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    xs.row(r) = x.row(i);
    ys(r) = y.y[static_cast<std::size_t>(i)];
    ++r;
  }
  return {std::move(xs), std::move(ys)};
}

void add_sum_info(SaReport& rep, std::size_t first_col, std::optional<std::size_t> total_col, std::size_t n_eff) {
  double sum = 0.0;
  bool all = true;
  for (const auto& r : rep.rows) {
    if (r.values[first_col]) {
      sum += *r.values[first_col];
    } else {
      all = false;
    }
  }
  if (all && !rep.rows.empty()) {
    rep.info.emplace_back("sum_S", num(sum));
    rep.info.emplace_back("interaction_share", num(1.0 - sum));
  } else {
    rep.info.emplace_back("sum_S", "undefined");
  }
  (void)total_col;
  rep.info.emplace_back("noise_tolerance", num(3.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n_eff, 1)))));
}

}  // namespace

std::optional<double> SaReport::get(std::string_view row, std::string_view column) const {
  const auto c = std::find(columns.begin(), columns.end(), column);
  if (c == columns.end()) return std::nullopt;
  for (const auto& r : rows) {
    if (r.name == row) return r.values[static_cast<std::size_t>(c - columns.begin())];
  }
  return std::nullopt;
}

double SaReport::at(std::string_view row, std::string_view column) const {
  const auto v = get(row, column);
  if (!v) throw Error(Errc::unsupported, "no defined value for " + std::string(row) + "/" + std::string(column));
  return *v;
}

std::optional<std::string> SaReport::info_value(std::string_view key) const {
  for (const auto& [k, v] : info) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string to_csv(const SaReport& report) {
  std::string out = "# method=" + report.method + " output=" + report.output + " n=" + std::to_string(report.n_used) +
                    " excluded=" + std::to_string(report.n_excluded);
  for (const auto& [k, v] : report.info) out += " " + k + "=" + v;
  out += "\nfactor";
  for (const auto& c : report.columns) out += "," + c;
  out += "\n";
  for (const auto& r : report.rows) {
    out += r.name;
    for (const auto& v : r.values) out += "," + (v ? num(*v) : std::string("undefined"));
    out += "\n";
  }
  return out;
}

SaReport regression_measures(const Matrix& x, const OutputVector& y, const std::vector<std::string>& names) {
  const auto k = static_cast<std::size_t>(x.cols());
  require_names(k, names);
  require_rows(static_cast<std::size_t>(x.rows()), y);
  const auto [xs, ys] = complete_rows(x, y);
  const auto n = static_cast<std::size_t>(xs.rows());
  if (n <= k + 1) {
    throw Error(Errc::size, "regression needs n > k + 1 valid rows (n=" + std::to_string(n) + ", k=" +
                                std::to_string(k) + ")");
  }
  const auto raw = regress(xs, ys, names);
  const Eigen::MatrixXd rx = rank_columns(xs);
  std::vector<double> ycol(ys.data(), ys.data() + ys.size());
  const auto ry = average_ranks(ycol);
  const auto ranked = regress(rx, Eigen::Map<const Eigen::VectorXd>(ry.data(), static_cast<Idx>(ry.size())), names);

  SaReport rep;
  rep.method = "regression";
  rep.output = y.name;
  rep.columns = {"SRC", "PCC", "PEAR", "SRRC", "PRCC", "SPEA"};
  rep.n_used = n;
  rep.n_excluded = y.fault_rows.size();
  for (std::size_t j = 0; j < k; ++j) {
    rep.rows.push_back({names[j],
                        {raw.coef[j], raw.partial[j], raw.pearson[j], ranked.coef[j], ranked.partial[j],
                         ranked.pearson[j]}});
  }
  rep.info.emplace_back("R2", raw.r2 ? num(*raw.r2) : "undefined");
  rep.info.emplace_back("rank_R2", ranked.r2 ? num(*ranked.r2) : "undefined");
  return rep;
}

SaReport morris_measures(const SampleMatrix& sample, const OutputVector& y, const std::vector<std::string>& names) {
  const auto* meta = std::get_if<MorrisMeta>(&sample.meta);
  if (!meta) throw Error(Errc::mismatch, "Morris measures need a Morris design, got " + method_name(sample.meta));
  const std::size_t k = sample.cols();
  require_names(k, names);
  require_rows(sample.rows(), y);
  if (sample.rows() != meta->trajectories * (k + 1)) throw Error(Errc::mismatch, "Morris metadata does not match the sample");
  const auto valid = y.valid_mask();
  std::vector<std::vector<double>> effects(k);
  std::vector<std::size_t> dropped(k, 0);
  for (std::size_t t = 0; t < meta->trajectories; ++t) {
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t r0 = t * (k + 1) + s;
      const std::size_t step = t * k + s;
      const std::size_t f = meta->factor[step];
      if (!valid[r0] || !valid[r0 + 1]) {
        ++dropped[f];
        continue;
      }
      const double h = meta->direction[step] * meta->delta;
      effects[f].push_back((y.y[r0 + 1] - y.y[r0]) / h);
    }
  }
  SaReport rep;
  rep.method = "morris";
  rep.output = y.name;
  rep.columns = {"mu", "mu_star", "sigma", "effects"};
  rep.n_used = y.n_effective();
  rep.n_excluded = y.fault_rows.size();
  std::size_t total_dropped = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const auto& e = effects[f];
    total_dropped += dropped[f];
    std::optional<double> mu, mu_star, sigma;
    if (!e.empty()) {
      double s = 0.0, sa = 0.0;
      for (double v : e) {
        s += v;
        sa += std::abs(v);
      }
      mu = s / static_cast<double>(e.size());
      mu_star = sa / static_cast<double>(e.size());
      if (e.size() >= 2) sigma = std::sqrt(shifted_variance(e));
    }
    rep.rows.push_back({names[f], {mu, mu_star, sigma, static_cast<double>(e.size())}});
  }
  rep.info.emplace_back("trajectories", std::to_string(meta->trajectories));
  rep.info.emplace_back("levels", std::to_string(meta->levels));
  rep.info.emplace_back("delta", num(meta->delta));
  rep.info.emplace_back("effects_dropped", std::to_string(total_dropped));
  return rep;
}

SaReport fast_indices(const SampleMatrix& sample, const OutputVector& y, const std::vector<std::string>& names) {
  const auto* meta = std::get_if<FastMeta>(&sample.meta);
  if (!meta) throw Error(Errc::mismatch, "FAST indices need a FAST design, got " + method_name(sample.meta));
  const std::size_t k = sample.cols();
  require_names(k, names);
  require_rows(sample.rows(), y);
  const std::size_t N = meta->block_size;
  const std::size_t M = meta->interference;
  const bool extended = meta->mode == FastMode::extended;
  if (sample.rows() != meta->blocks.size() * N) throw Error(Errc::mismatch, "FAST metadata does not match the sample");
  const auto valid = y.valid_mask();

  SaReport rep;
  rep.method = extended ? "fast-extended" : "fast-classic";
  rep.output = y.name;
  rep.columns = extended ? std::vector<std::string>{"S", "ST"} : std::vector<std::string>{"S"};
  rep.n_used = y.n_effective();
  rep.n_excluded = y.fault_rows.size();

  auto group_name = [&](std::size_t g) {
    if (g < meta->group_names.size() && !meta->group_names[g].empty()) return meta->group_names[g];
    std::string s;
    for (auto f : meta->groups[g]) s += (s.empty() ? "" : "+") + names[f];
    return s;
  };

  // Per block: variance and the spectrum at the needed frequencies.
  auto block_stats = [&](std::size_t b, std::span<const std::size_t> freqs, double& var) -> std::optional<std::vector<double>> {
    std::span<const double> yb(y.y.data() + b * N, N);
    for (std::size_t j = 0; j < N; ++j) {
      if (!valid[b * N + j]) return std::nullopt;
    }
    double mean = 0.0, scale = 0.0;
    for (double v : yb) {
      mean += v;
      scale = std::max(scale, std::abs(v));
    }
    mean /= static_cast<double>(N);
    var = 0.0;
    for (double v : yb) var += (v - mean) * (v - mean);
    var /= static_cast<double>(N);
    if (degenerate(var, scale)) return std::nullopt;
    return kernels::fourier_power(yb, freqs);
  };

  std::size_t undefined_blocks = 0;
  if (!extended) {
    const auto& blk = meta->blocks.front();
    std::vector<std::size_t> freqs;
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t p = 1; p <= M; ++p) freqs.push_back(p * blk.omega[f]);
    }
    double var = 0.0;
    const auto power = block_stats(0, freqs, var);
    if (!power) ++undefined_blocks;
    for (std::size_t f = 0; f < k; ++f) {
      std::optional<double> s;
      if (power) {
        double d = 0.0;
        for (std::size_t p = 0; p < M; ++p) d += 2.0 * (*power)[f * M + p];
        s = d / var;
      }
      rep.rows.push_back({names[f], {s}});
    }
  } else {
    const std::size_t low = meta->omega_max / 2;
    for (std::size_t g = 0; g < meta->groups.size(); ++g) {
      std::vector<std::size_t> freqs;
      for (std::size_t p = 1; p <= M; ++p) freqs.push_back(p * meta->omega_max);
      for (std::size_t p = 1; p <= low; ++p) freqs.push_back(p);
      double var = 0.0;
      const auto power = block_stats(g, freqs, var);
      std::optional<double> s, st;
      if (power) {
        double d = 0.0, dc = 0.0;
        for (std::size_t p = 0; p < M; ++p) d += 2.0 * (*power)[p];
        for (std::size_t p = 0; p < low; ++p) dc += 2.0 * (*power)[M + p];
        s = d / var;
        st = 1.0 - dc / var;
      } else {
        ++undefined_blocks;
      }
      rep.rows.push_back({group_name(g), {s, st}});
    }
  }
  rep.info.emplace_back("N_per_block", std::to_string(N));
  rep.info.emplace_back("M", std::to_string(M));
  rep.info.emplace_back("omega_max", std::to_string(meta->omega_max));
  if (undefined_blocks) rep.info.emplace_back("undefined_blocks", std::to_string(undefined_blocks));
  add_sum_info(rep, 0, extended ? std::optional<std::size_t>(1) : std::nullopt, N);
  return rep;
}

SaReport sobol_from_outputs(const SampleMatrix& sample, const OutputVector& y, const std::vector<std::string>& names) {
  const auto* meta = std::get_if<SaltelliMeta>(&sample.meta);
  if (!meta) throw Error(Errc::mismatch, "Sobol indices need a saltelli design, got " + method_name(sample.meta));
  const std::size_t k = sample.cols();
  require_names(k, names);
  require_rows(sample.rows(), y);
  const std::size_t N = meta->base_size;
  if (sample.rows() != N * (k + 2)) throw Error(Errc::mismatch, "saltelli metadata does not match the sample");
  const auto valid = y.valid_mask();
  auto fA = [&](std::size_t j) { return y.y[j]; };
  auto fB = [&](std::size_t j) { return y.y[N + j]; };
  auto fAB = [&](std::size_t i, std::size_t j) { return y.y[(2 + i) * N + j]; };

  // Output variance over the valid A and B rows.
  double mean = 0.0, scale = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < 2 * N; ++j) {
    if (!valid[j]) continue;
    mean += y.y[j];
    scale = std::max(scale, std::abs(y.y[j]));
    ++count;
  }
  SaReport rep;
  rep.method = "sobol";
  rep.output = y.name;
  rep.columns = {"S", "ST"};
  rep.n_used = y.n_effective();
  rep.n_excluded = y.fault_rows.size();
  std::optional<double> var;
  if (count >= 2) {
    mean /= static_cast<double>(count);
    double v = 0.0;
    for (std::size_t j = 0; j < 2 * N; ++j) {
      if (valid[j]) v += (y.y[j] - mean) * (y.y[j] - mean);
    }
    v /= static_cast<double>(count);
    if (!degenerate(v, scale)) var = v;
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::optional<double> s, st;
    if (var) {
      double first = 0.0, total = 0.0;
      std::size_t used = 0;
      for (std::size_t j = 0; j < N; ++j) {
        if (!valid[j] || !valid[N + j] || !valid[(2 + i) * N + j]) continue;
        first += fB(j) * (fAB(i, j) - fA(j));
        const double d = fA(j) - fAB(i, j);
        total += d * d;
        ++used;
      }
      if (used > 0) {
        s = first / static_cast<double>(used) / *var;
        st = 0.5 * total / static_cast<double>(used) / *var;
      }
    }
    rep.rows.push_back({names[i], {s, st}});
  }
  rep.info.emplace_back("N", std::to_string(N));
  rep.info.emplace_back("base", meta->base == SaltelliBase::lptau ? "lptau" : "random");
  rep.info.emplace_back("estimator", "first=saltelli2010,total=jansen");
  if (!var) rep.info.emplace_back("variance", "degenerate");
  add_sum_info(rep, 0, 1, N);
  return rep;
}

std::vector<SaReport> sobol_indices(const ModelDef& model, const FactorSpace& space, std::size_t base_size, Seed seed,
                                    SaltelliBase base, const RunOptions& options) {
  if (space.correlation) throw Error(Errc::unsupported, "Sobol indices assume independent inputs");
  auto sample = saltelli_design(space.size(), base_size, seed, base);
  bind(sample, space);
  const auto run = evaluate_all(model, sample, options);
  std::vector<SaReport> out;
  for (const auto& o : run.outputs) out.push_back(sobol_from_outputs(sample, o, space.names()));
  return out;
}

std::optional<double> importance_binned(std::span<const double> x, std::span<const double> y, std::size_t bins) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(Errc::size, "x and y differ in length");
  if (bins == 0) throw Error(Errc::parameter, "bin count must be >= 1");
  if (n < 10 * bins) {
    throw Error(Errc::size, "binned importance needs n >= 10 * bins (n=" + std::to_string(n) + ", bins=" +
                                std::to_string(bins) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  double mean = 0.0, scale = 0.0;
  for (double v : y) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (degenerate(var, scale)) return std::nullopt;
  double between = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * n / bins;
    const std::size_t hi = (b + 1) * n / bins;
    double s = 0.0;
    for (std::size_t t = lo; t < hi; ++t) s += y[order[t]];
    const double bm = s / static_cast<double>(hi - lo);
    between += static_cast<double>(hi - lo) * (bm - mean) * (bm - mean);
  }
  return between / static_cast<double>(n) / var;
}

SaReport importance_measures(const Matrix& x, const OutputVector& y, const std::vector<std::string>& names,
                             std::size_t bins) {
  const auto k = static_cast<std::size_t>(x.cols());
  require_names(k, names);
  require_rows(static_cast<std::size_t>(x.rows()), y);
  const auto [xs, ys] = complete_rows(x, y);
  const auto n = static_cast<std::size_t>(xs.rows());
  if (bins == 0) bins = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  SaReport rep;
  rep.method = "importance";
  rep.output = y.name;
  rep.columns = {"S"};
  rep.n_used = n;
  rep.n_excluded = y.fault_rows.size();
  std::vector<double> yv(ys.data(), ys.data() + ys.size());
  std::vector<double> col(n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = xs(static_cast<Idx>(i), static_cast<Idx>(j));
    rep.rows.push_back({names[j], {importance_binned(col, yv, bins)}});
  }
  rep.info.emplace_back("bins", std::to_string(bins));
  add_sum_info(rep, 0, std::nullopt, n);
  return rep;
}

}  // namespace gsa
