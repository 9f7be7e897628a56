#include "gsa/sobol_sequence.hpp"

#include <bit>
#include <string>

#include "gsa/error.hpp"

namespace gsa {

SobolSequence::SobolSequence(std::size_t dimension, std::uint64_t skip)
    : dim_(dimension), directions_(dimension), state_(dimension, 0u), point_(dimension, 0.0) {
  if (dimension == 0) throw Error(Errc::size, "LP-tau dimension must be >= 1");
  if (dimension > kMaxDimension) {
    throw Error(Errc::dimension, "LP-tau supports at most " + std::to_string(kMaxDimension) +
                                     " dimensions, requested " + std::to_string(dimension));
  }
  // Dimension 1 is the van der Corput sequence in base 2.
  for (int b = 0; b < kBits; ++b) directions_[0][b] = 1u << (kBits - 1 - b);
  for (std::size_t d = 1; d < dimension; ++d) {
    const auto& e = detail::kSobolDirections[d - 1];
    const int s = static_cast<int>(e.degree);
    auto& v = directions_[d];
    for (int b = 0; b < s && b < kBits; ++b) v[b] = e.m[b] << (kBits - 1 - b);
    for (int b = s; b < kBits; ++b) {
      std::uint32_t x = v[b - s] ^ (v[b - s] >> s);
      for (int j = 1; j < s; ++j) {
        if ((e.polynomial >> (s - j)) & 1u) x ^= v[b - j];
      }
      v[b] = x;
    }
  }
  if (skip + 1 >= (std::uint64_t{1} << kBits)) throw Error(Errc::size, "LP-tau skip too large");
  for (std::uint64_t i = 0; i < skip; ++i) next();
}

const std::vector<double>& SobolSequence::next() {
  // Point i is point i-1 with the direction for the lowest zero bit of i-1 applied.
  const int c = std::countr_one(index_);
  if (c >= kBits) throw Error(Errc::size, "LP-tau sequence exhausted");
  ++index_;
  for (std::size_t d = 0; d < dim_; ++d) {
    state_[d] ^= directions_[d][c];
    point_[d] = static_cast<double>(state_[d]) * 0x1.0p-32;
  }
  return point_;
}

}  // namespace gsa
