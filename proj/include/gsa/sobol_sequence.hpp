#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace gsa {

namespace detail {
struct DirectionEntry {
  std::uint32_t polynomial;  // bit-encoded, includes x^s and 1 terms
  std::uint32_t degree;
  std::array<std::uint32_t, 16> m;
};
inline constexpr std::size_t kSobolTableSize = 127;
extern const std::array<DirectionEntry, kSobolTableSize> kSobolDirections;
}  // namespace detail

/// Gray-code Sobol (LP-tau) generator.  Point index 0 (the origin) is never
/// emitted: the first call to next() returns sequence point 1 + skip.
class SobolSequence {
 public:
  static constexpr std::size_t kMaxDimension = detail::kSobolTableSize + 1;
  static constexpr int kBits = 32;

  explicit SobolSequence(std::size_t dimension, std::uint64_t skip = 0);

  std::size_t dimension() const { return dim_; }
  const std::vector<double>& next();

 private:
  std::size_t dim_;
  std::uint64_t index_ = 0;  // index of the last emitted point
  std::vector<std::array<std::uint32_t, kBits>> directions_;
  std::vector<std::uint32_t> state_;
  std::vector<double> point_;
};

}  // namespace gsa
