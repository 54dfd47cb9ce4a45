#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"

namespace mcw {

using BitVector = std::vector<std::uint8_t>;

/// Gray-coded square QAM with unit average symbol energy.
class QamMapper {
 public:
  /// order in {4, 16, 64}.
  explicit QamMapper(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_; }

  cplx map(std::span<const std::uint8_t> bits) const;
  /// Hard decision back to bits (nearest constellation point).
  void demap(cplx symbol, std::span<std::uint8_t> bits_out) const;

  SymbolGrid map_grid(std::span<const std::uint8_t> bits, std::size_t rows, std::size_t cols) const;
  BitVector demap_grid(const SymbolGrid& grid) const;

 private:
  int order_;
  int bits_;
  int side_;
  double scale_;
};

BitVector random_bits(std::size_t count, Rng& rng);

}  // namespace mcw
