#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "gsa/distributions.hpp"
#include "gsa/types.hpp"

namespace gsa {

struct PlainMeta {
  std::string method;  // "random", "lptau" or "fixed"
};

struct LhsMeta {
  std::size_t strata = 0;      // points per replicate block
  std::size_t replicates = 1;
  std::vector<std::size_t> replicate;  // block label per row
};

struct MorrisMeta {
  std::size_t levels = 4;
  double delta = 2.0 / 3.0;
  std::size_t trajectories = 0;
  std::vector<std::size_t> trajectory;  // per row
  // Per transition (trajectories * k entries, row t*(k+1)+s -> t*(k+1)+s+1):
  std::vector<std::size_t> factor;
  std::vector<int> direction;  // +1 or -1
};

enum class FastMode { classic, extended };

struct FastBlock {
  std::vector<std::size_t> omega;  // per factor
  std::vector<double> phase;       // per factor, radians
};

struct FastMeta {
  FastMode mode = FastMode::extended;
  std::size_t interference = 4;     // M
  std::size_t block_size = 0;       // N per factor (or per group); the whole design for classic
  std::size_t omega_max = 0;
  // Extended mode: one entry per group, each listing the factors it carries.
  // Ungrouped designs use singleton groups.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::string> group_names;
  std::vector<FastBlock> blocks;
};

enum class SaltelliBase { lptau, random };

// Rows: A (N), B (N), then AB_i for i = 1..k (N each), where AB_i is A with
// column i taken from B.
struct SaltelliMeta {
  std::size_t base_size = 0;
  SaltelliBase base = SaltelliBase::lptau;
};

using DesignMeta = std::variant<PlainMeta, LhsMeta, MorrisMeta, FastMeta, SaltelliMeta>;

std::string method_name(const DesignMeta& meta);

struct SampleMatrix {
  Matrix unit;    // n x k in the unit hypercube
  Matrix values;  // n x k factor values; equals `unit` until bound to a space
  DesignMeta meta;
  Seed seed = 0;

  std::size_t rows() const { return static_cast<std::size_t>(unit.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(unit.cols()); }
};

SampleMatrix random_design(std::size_t k, std::size_t n, Seed seed);

/// Latin hypercube; `replicates` independent blocks of n / replicates rows.
SampleMatrix lhs_design(std::size_t k, std::size_t n, Seed seed, std::size_t replicates = 1);

/// First n LP-tau points after skipping `skip` points (the origin is never used).
SampleMatrix lptau_design(std::size_t k, std::size_t n, std::uint64_t skip = 0);

/// Morris one-at-a-time trajectories on a `levels`-level grid, delta = p / (2(p-1)).
SampleMatrix morris_design(std::size_t k, std::size_t trajectories, std::size_t levels, Seed seed);

struct FastOptions {
  FastMode mode = FastMode::extended;
  std::size_t interference = 4;
  std::vector<std::vector<std::size_t>> groups;  // extended mode only; empty = one per factor
  std::vector<std::string> group_names;
};

SampleMatrix fast_design(std::size_t k, std::size_t block_size, const FastOptions& options, Seed seed);

/// Interference-free frequency set for classic FAST: no nonzero integer
/// combination sum(a_i * omega_i) with sum|a_i| <= M + 1 vanishes.
std::vector<std::size_t> classic_fast_frequencies(std::size_t k, std::size_t interference);

/// Smallest admissible extended-FAST block size for interference order M.
std::size_t min_extended_block(std::size_t interference);

SampleMatrix saltelli_design(std::size_t k, std::size_t base_size, Seed seed,
                             SaltelliBase base = SaltelliBase::lptau);

/// Unit matrix read verbatim from a sample file.
SampleMatrix fixed_design(const std::filesystem::path& path);

Matrix map_to_values(const Matrix& unit, const FactorSpace& space);

/// Fills sample.values from sample.unit.
void bind(SampleMatrix& sample, const FactorSpace& space);

}  // namespace gsa
