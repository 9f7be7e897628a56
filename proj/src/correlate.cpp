#include "gsa/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gsa/distributions.hpp"
#include "gsa/error.hpp"
#include "gsa/rng.hpp"

namespace gsa {

namespace {

using Idx = Eigen::Index;

std::vector<double> column(const Matrix& m, Idx j) {
  std::vector<double> c(static_cast<std::size_t>(m.rows()));
  for (Idx i = 0; i < m.rows(); ++i) c[static_cast<std::size_t>(i)] = m(i, j);
  return c;
}

void check_target(const Matrix& target, Idx k) {
  if (target.rows() != k || target.cols() != k) {
    throw Error(Errc::size, "target correlation must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  for (Idx i = 0; i < k; ++i) {
    if (std::abs(target(i, i) - 1.0) > 1e-12) throw Error(Errc::parameter, "target diagonal must be 1");
    for (Idx j = 0; j < i; ++j) {
      if (std::abs(target(i, j) - target(j, i)) > 1e-12) throw Error(Errc::parameter, "target must be symmetric");
      if (std::abs(target(i, j)) > 1.0) throw Error(Errc::parameter, "target entries must lie in [-1,1]");
    }
  }
  for (Idx m = 1; m <= k; ++m) {
    Eigen::MatrixXd minor = target.topLeftCorner(m, m);
    if (Eigen::LLT<Eigen::MatrixXd>(minor).info() != Eigen::Success) {
      throw Error(Errc::not_positive_definite,
                  "target correlation is not positive definite: leading minor of order " +
                      std::to_string(m) + " is not positive");
    }
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j + 1);  // mean of positions i+1..j
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(Errc::size, "correlation needs two aligned vectors of length >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

Matrix measured_spearman(const Matrix& m) {
  if (m.rows() < 2) throw Error(Errc::size, "Spearman correlation needs n >= 2 rows");
  const Idx k = m.cols();
  std::vector<std::vector<double>> ranks;
  for (Idx j = 0; j < k; ++j) ranks.push_back(average_ranks(column(m, j)));
  Matrix out = Matrix::Identity(k, k);
  for (Idx i = 0; i < k; ++i) {
    for (Idx j = 0; j < i; ++j) {
      const double r = pearson(ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(j)]);
      out(i, j) = out(j, i) = r;
    }
  }
  return out;
}

Matrix iman_conover(const Matrix& unit, const Matrix& target, Seed seed) {
  const Idx n = unit.rows();
  const Idx k = unit.cols();
  if (n <= k) {
    throw Error(Errc::size, "Iman-Conover needs more rows than columns (n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");
  }
  check_target(target, k);
  if (k == 1) return unit;

  // Normal scores correlate by Pearson; convert the Spearman target accordingly.
  Eigen::MatrixXd pearson_target(k, k);
  for (Idx i = 0; i < k; ++i) {
    for (Idx j = 0; j < k; ++j) {
      pearson_target(i, j) = i == j ? 1.0 : 2.0 * std::sin(std::numbers::pi * target(i, j) / 6.0);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> target_chol(pearson_target);
  if (target_chol.info() != Eigen::Success) {
    throw Error(Errc::not_positive_definite,
                "target correlation is not positive definite after conversion to normal-score scale");
  }

  // Van der Waerden scores, independently shuffled per column.
  std::vector<double> scores(static_cast<std::size_t>(n));
  for (Idx i = 0; i < n; ++i) {
    scores[static_cast<std::size_t>(i)] = normal_quantile(static_cast<double>(i + 1) / static_cast<double>(n + 1));
  }
  Rng rng(seed);
  Eigen::MatrixXd S(n, k);
  for (Idx j = 0; j < k; ++j) {
    auto col = scores;
    rng.shuffle(col);
    for (Idx i = 0; i < n; ++i) S(i, j) = col[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd centered = S.rowwise() - S.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  Eigen::MatrixXd E = sd.asDiagonal().inverse() * cov * sd.asDiagonal().inverse();
  Eigen::LLT<Eigen::MatrixXd> score_chol(E);
  if (score_chol.info() != Eigen::Success) {
    throw Error(Errc::not_positive_definite, "score correlation matrix is singular; increase n");
  }
  // T = S * (Q^-1)^T * P^T with E = Q Q^T and target = P P^T.
  Eigen::MatrixXd Qinv = score_chol.matrixL().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd P = target_chol.matrixL();
  Eigen::MatrixXd T = S * Qinv.transpose() * P.transpose();

  Matrix out(n, k);
  for (Idx j = 0; j < k; ++j) {
    auto sorted = column(unit, j);
    std::sort(sorted.begin(), sorted.end());
    std::vector<Idx> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Idx{0});
    std::stable_sort(order.begin(), order.end(), [&](Idx a, Idx b) { return T(a, j) < T(b, j); });
    for (Idx r = 0; r < n; ++r) out(order[static_cast<std::size_t>(r)], j) = sorted[static_cast<std::size_t>(r)];
  }
  return out;
}

}  // namespace gsa
