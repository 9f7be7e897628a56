#include "gsa/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "gsa/error.hpp"
#include "gsa/io.hpp"
#include "gsa/rng.hpp"
#include "gsa/sobol_sequence.hpp"

namespace gsa {

namespace {

using Idx = Eigen::Index;

void require_size(std::size_t k, std::size_t n) {
  if (k == 0) throw Error(Errc::size, "factor count k must be >= 1");
  if (n == 0) throw Error(Errc::size, "sample size n must be >= 1");
}

SampleMatrix make(Matrix unit, DesignMeta meta, Seed seed) {
  SampleMatrix s;
  s.values = unit;
  s.unit = std::move(unit);
  s.meta = std::move(meta);
  s.seed = seed;
  return s;
}

// Point in stratum `s` of `m`, guaranteed to satisfy floor(x * m) == s.
double stratified(std::size_t s, std::size_t m, double u) {
  const double md = static_cast<double>(m);
  double x = (static_cast<double>(s) + u) / md;
  while (x > 0.0 && static_cast<std::size_t>(std::floor(x * md)) > s) x = std::nextafter(x, 0.0);
  while (static_cast<std::size_t>(std::floor(x * md)) < s) x = std::nextafter(x, 1.0);
  return x;
}

}  // namespace

std::string method_name(const DesignMeta& meta) {
  struct V {
    std::string operator()(const PlainMeta& m) const { return m.method; }
    std::string operator()(const LhsMeta& m) const { return m.replicates > 1 ? "rlhs" : "lhs"; }
    std::string operator()(const MorrisMeta&) const { return "morris"; }
    std::string operator()(const FastMeta& m) const {
      return m.mode == FastMode::classic ? "fast-classic" : "fast-extended";
    }
    std::string operator()(const SaltelliMeta&) const { return "saltelli"; }
  };
  return std::visit(V{}, meta);
}

SampleMatrix random_design(std::size_t k, std::size_t n, Seed seed) {
  require_size(k, n);
  Rng rng(seed);
  Matrix unit(static_cast<Idx>(n), static_cast<Idx>(k));
  for (Idx i = 0; i < unit.rows(); ++i) {
    for (Idx j = 0; j < unit.cols(); ++j) unit(i, j) = rng.uniform();
  }
  return make(std::move(unit), PlainMeta{"random"}, seed);
}

SampleMatrix lhs_design(std::size_t k, std::size_t n, Seed seed, std::size_t replicates) {
  require_size(k, n);
  if (replicates == 0) throw Error(Errc::parameter, "replicate count must be >= 1");
  if (n % replicates != 0) {
    throw Error(Errc::parameter, "replicate count " + std::to_string(replicates) +
                                     " does not divide sample size " + std::to_string(n));
  }
  const std::size_t m = n / replicates;
  Rng rng(seed);
  Matrix unit(static_cast<Idx>(n), static_cast<Idx>(k));
  LhsMeta meta{m, replicates, {}};
  meta.replicate.resize(n);
  for (std::size_t b = 0; b < replicates; ++b) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto perm = rng.permutation(m);
      for (std::size_t i = 0; i < m; ++i) {
        unit(static_cast<Idx>(b * m + i), static_cast<Idx>(j)) = stratified(perm[i], m, rng.uniform());
      }
    }
    for (std::size_t i = 0; i < m; ++i) meta.replicate[b * m + i] = b;
  }
  return make(std::move(unit), std::move(meta), seed);
}

SampleMatrix lptau_design(std::size_t k, std::size_t n, std::uint64_t skip) {
  require_size(k, n);
  SobolSequence seq(k, skip);
  Matrix unit(static_cast<Idx>(n), static_cast<Idx>(k));
  for (Idx i = 0; i < unit.rows(); ++i) {
    const auto& p = seq.next();
    for (Idx j = 0; j < unit.cols(); ++j) unit(i, j) = p[static_cast<std::size_t>(j)];
  }
  return make(std::move(unit), PlainMeta{"lptau"}, skip);
}

SampleMatrix morris_design(std::size_t k, std::size_t trajectories, std::size_t levels, Seed seed) {
  if (k == 0) throw Error(Errc::size, "factor count k must be >= 1");
  if (trajectories == 0) throw Error(Errc::parameter, "trajectory count r must be >= 1");
  if (levels < 2 || levels % 2 != 0) {
    throw Error(Errc::parameter, "Morris level count p must be even and >= 2, got " + std::to_string(levels));
  }
  const std::size_t jump = levels / 2;  // grid steps per move
  const double grid = 1.0 / static_cast<double>(levels - 1);
  Rng rng(seed);
  MorrisMeta meta;
  meta.levels = levels;
  meta.delta = static_cast<double>(levels) / (2.0 * static_cast<double>(levels - 1));
  meta.trajectories = trajectories;
  Matrix unit(static_cast<Idx>(trajectories * (k + 1)), static_cast<Idx>(k));
  std::vector<std::size_t> level(k);
  for (std::size_t t = 0; t < trajectories; ++t) {
    std::vector<int> dir(k);
    for (std::size_t j = 0; j < k; ++j) {
      // Lower end of the move lies in the admissible sub-grid {0, ..., p/2 - 1}.
      const std::size_t low = rng.below(jump);
      dir[j] = rng.below(2) == 0 ? 1 : -1;
      level[j] = dir[j] > 0 ? low : low + jump;
    }
    const auto order = rng.permutation(k);
    const std::size_t base = t * (k + 1);
    for (std::size_t j = 0; j < k; ++j) unit(static_cast<Idx>(base), static_cast<Idx>(j)) = level[j] * grid;
    meta.trajectory.push_back(t);
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t f = order[s];
      level[f] = dir[f] > 0 ? level[f] + jump : level[f] - jump;
      const auto row = static_cast<Idx>(base + s + 1);
      unit.row(row) = unit.row(row - 1);
      unit(row, static_cast<Idx>(f)) = static_cast<double>(level[f]) * grid;
      meta.trajectory.push_back(t);
      meta.factor.push_back(f);
      meta.direction.push_back(dir[f]);
    }
  }
  return make(std::move(unit), std::move(meta), seed);
}

std::vector<std::size_t> classic_fast_frequencies(std::size_t k, std::size_t interference) {
  if (k == 0) throw Error(Errc::size, "factor count k must be >= 1");
  if (interference == 0) throw Error(Errc::parameter, "interference order M must be >= 1");
  const long order = static_cast<long>(interference) + 1;
  // reach[w] = { sum c_i * omega_i : sum |c_i| <= w } over the chosen frequencies.
  std::vector<std::set<long>> reach(static_cast<std::size_t>(order) + 1, std::set<long>{0});
  std::vector<std::size_t> out;
  long candidate = 1;
  while (out.size() < k) {
    bool clean = true;
    for (long a = 1; a <= order && clean; ++a) {
      if (reach[static_cast<std::size_t>(order - a)].count(a * candidate)) clean = false;
    }
    if (!clean) {
      ++candidate;
      continue;
    }
    out.push_back(static_cast<std::size_t>(candidate));
    auto next = reach;
    for (long w = 1; w <= order; ++w) {
      for (long c = 1; c <= w; ++c) {
        for (long v : reach[static_cast<std::size_t>(w - c)]) {
          next[static_cast<std::size_t>(w)].insert(v + c * candidate);
          next[static_cast<std::size_t>(w)].insert(v - c * candidate);
        }
      }
    }
    reach = std::move(next);
    ++candidate;
  }
  return out;
}

std::size_t min_extended_block(std::size_t interference) {
  // omega_max = (N - 1) / (2M) must reach 2M so that the complement band
  // {1, ..., omega_max / (2M)} is nonempty; N is odd.
  return 4 * interference * interference + 1;
}

SampleMatrix fast_design(std::size_t k, std::size_t block_size, const FastOptions& options, Seed seed) {
  require_size(k, block_size);
  const std::size_t M = options.interference;
  if (M == 0) throw Error(Errc::parameter, "interference order M must be >= 1");
  if (block_size % 2 == 0) {
    throw Error(Errc::size, "FAST block size must be odd, got " + std::to_string(block_size));
  }
  FastMeta meta;
  meta.mode = options.mode;
  meta.interference = M;
  meta.block_size = block_size;
  Rng rng(seed);
  const std::size_t N = block_size;
  std::vector<double> s(N);
  for (std::size_t j = 0; j < N; ++j) {
    s[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(N);
  }
  auto fill_block = [&](Matrix& unit, std::size_t row0, const FastBlock& b) {
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t f = 0; f < k; ++f) {
        const double arg = static_cast<double>(b.omega[f]) * s[j] + b.phase[f];
        const double x = 0.5 + std::asin(std::sin(arg)) / std::numbers::pi;
        unit(static_cast<Idx>(row0 + j), static_cast<Idx>(f)) = std::clamp(x, 0.0, 1.0);
      }
    }
  };

  if (options.mode == FastMode::classic) {
    if (!options.groups.empty()) throw Error(Errc::parameter, "groups require extended FAST");
    FastBlock b;
    b.omega = classic_fast_frequencies(k, M);
    meta.omega_max = *std::max_element(b.omega.begin(), b.omega.end());
    if (N < 2 * M * meta.omega_max + 1) {
      throw Error(Errc::size, "classic FAST with k=" + std::to_string(k) + " needs N >= " +
                                  std::to_string(2 * M * meta.omega_max + 1) + " (omega_max=" +
                                  std::to_string(meta.omega_max) + "), got " + std::to_string(N));
    }
    for (std::size_t f = 0; f < k; ++f) b.phase.push_back(2.0 * std::numbers::pi * rng.uniform());
    for (std::size_t f = 0; f < k; ++f) meta.groups.push_back({f});
    meta.blocks.push_back(std::move(b));
    Matrix unit(static_cast<Idx>(N), static_cast<Idx>(k));
    fill_block(unit, 0, meta.blocks.front());
    return make(std::move(unit), std::move(meta), seed);
  }

  if (N < min_extended_block(M)) {
    throw Error(Errc::size, "extended FAST needs N_per_factor >= " + std::to_string(min_extended_block(M)) +
                                " for M=" + std::to_string(M) + ", got " + std::to_string(N));
  }
  meta.omega_max = (N - 1) / (2 * M);
  const std::size_t complement_max = std::max<std::size_t>(1, meta.omega_max / (2 * M));
  if (options.groups.empty()) {
    for (std::size_t f = 0; f < k; ++f) meta.groups.push_back({f});
  } else {
    std::vector<int> owner(k, -1);
    for (std::size_t g = 0; g < options.groups.size(); ++g) {
      if (options.groups[g].empty()) throw Error(Errc::parameter, "group " + std::to_string(g + 1) + " is empty");
      for (auto f : options.groups[g]) {
        if (f >= k) throw Error(Errc::parameter, "group member index out of range");
        if (owner[f] >= 0) throw Error(Errc::parameter, "factor " + std::to_string(f + 1) + " is in two groups");
        owner[f] = static_cast<int>(g);
      }
    }
    for (std::size_t f = 0; f < k; ++f) {
      if (owner[f] < 0) throw Error(Errc::parameter, "factor " + std::to_string(f + 1) + " belongs to no group");
    }
    meta.groups = options.groups;
    meta.group_names = options.group_names;
  }
  const std::size_t g = meta.groups.size();
  Matrix unit(static_cast<Idx>(g * N), static_cast<Idx>(k));
  for (std::size_t b = 0; b < g; ++b) {
    FastBlock block;
    block.omega.assign(k, 0);
    std::vector<bool> focal(k, false);
    for (auto f : meta.groups[b]) focal[f] = true;
    // Complement frequencies spread evenly over [1, complement_max].  Adjacent
    // low frequencies share harmonics and couple the complement factors along
    // the curve, which biases the block variance.
    const std::size_t others = k - meta.groups[b].size();
    std::size_t c = 0;
    for (std::size_t f = 0; f < k; ++f) {
      if (focal[f]) {
        block.omega[f] = meta.omega_max;
      } else {
        block.omega[f] = others < 2 ? 1 : 1 + c * (complement_max - 1) / (others - 1);
        ++c;
      }
    }
    for (std::size_t f = 0; f < k; ++f) block.phase.push_back(2.0 * std::numbers::pi * rng.uniform());
    fill_block(unit, b * N, block);
    meta.blocks.push_back(std::move(block));
  }
  return make(std::move(unit), std::move(meta), seed);
}

SampleMatrix saltelli_design(std::size_t k, std::size_t base_size, Seed seed, SaltelliBase base) {
  require_size(k, base_size);
  Matrix ab(static_cast<Idx>(base_size), static_cast<Idx>(2 * k));
  if (base == SaltelliBase::lptau) {
    ab = lptau_design(2 * k, base_size, seed).unit;
  } else {
    ab = random_design(2 * k, base_size, seed).unit;
  }
  const auto N = static_cast<Idx>(base_size);
  const auto K = static_cast<Idx>(k);
  Matrix unit((K + 2) * N, K);
  unit.topRows(N) = ab.leftCols(K);
  unit.middleRows(N, N) = ab.rightCols(K);
  for (Idx i = 0; i < K; ++i) {
    auto block = unit.middleRows((2 + i) * N, N);
    block = ab.leftCols(K);
    block.col(i) = ab.col(K + i);
  }
  return make(std::move(unit), SaltelliMeta{base_size, base}, seed);
}

SampleMatrix fixed_design(const std::filesystem::path& path) {
  Matrix unit = read_sample_file(path);
  for (Idx i = 0; i < unit.rows(); ++i) {
    for (Idx j = 0; j < unit.cols(); ++j) {
      if (!(unit(i, j) >= 0.0 && unit(i, j) <= 1.0)) {
        throw Error(Errc::range, "row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                                     ": value " + format_number(unit(i, j)) + " outside [0,1]");
      }
    }
  }
  return make(std::move(unit), PlainMeta{"fixed"}, 0);
}

Matrix map_to_values(const Matrix& unit, const FactorSpace& space) {
  if (static_cast<std::size_t>(unit.cols()) != space.size()) {
    throw Error(Errc::size, "sample has " + std::to_string(unit.cols()) + " columns but the factor space has " +
                                std::to_string(space.size()) + " factors");
  }
  Matrix values(unit.rows(), unit.cols());
  for (Idx j = 0; j < unit.cols(); ++j) {
    const auto& dist = space.factors[static_cast<std::size_t>(j)].dist;
    for (Idx i = 0; i < unit.rows(); ++i) values(i, j) = quantile(dist, unit(i, j));
  }
  return values;
}

void bind(SampleMatrix& sample, const FactorSpace& space) { sample.values = map_to_values(sample.unit, space); }

}  // namespace gsa
