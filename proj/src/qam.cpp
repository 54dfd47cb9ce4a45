#include "mcwave/qam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcw {
namespace {

int gray_to_binary(int g) {
  int b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

}  // namespace

QamMapper::QamMapper(int order) : order_(order) {
  if (order != 4 && order != 16 && order != 64) throw std::invalid_argument("qam_order must be 4, 16 or 64");
  bits_ = static_cast<int>(std::lround(std::log2(order)));
  side_ = 1 << (bits_ / 2);
  scale_ = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
}

cplx QamMapper::map(std::span<const std::uint8_t> bits) const {
  const int half = bits_ / 2;
  int gi = 0, gq = 0;
  for (int b = 0; b < half; ++b) gi = (gi << 1) | (bits[b] & 1);
  for (int b = 0; b < half; ++b) gq = (gq << 1) | (bits[half + b] & 1);
  const int li = gray_to_binary(gi);
  const int lq = gray_to_binary(gq);
  return {(2.0 * li - (side_ - 1)) * scale_, (2.0 * lq - (side_ - 1)) * scale_};
}

void QamMapper::demap(cplx symbol, std::span<std::uint8_t> bits_out) const {
  const int half = bits_ / 2;
  auto level = [&](double v) {
    const long l = std::lround((v / scale_ + (side_ - 1)) / 2.0);
    return static_cast<int>(std::clamp<long>(l, 0, side_ - 1));
  };
  const int gi = level(symbol.real()) ^ (level(symbol.real()) >> 1);
  const int gq = level(symbol.imag()) ^ (level(symbol.imag()) >> 1);
  for (int b = 0; b < half; ++b) {
    bits_out[b] = static_cast<std::uint8_t>((gi >> (half - 1 - b)) & 1);
    bits_out[half + b] = static_cast<std::uint8_t>((gq >> (half - 1 - b)) & 1);
  }
}

SymbolGrid QamMapper::map_grid(std::span<const std::uint8_t> bits, std::size_t rows, std::size_t cols) const {
  if (bits.size() != rows * cols * static_cast<std::size_t>(bits_))
    throw std::invalid_argument("bit count does not fill the grid");
  SymbolGrid g(rows, cols);
  std::size_t pos = 0;
  for (auto& v : g.values()) {
    v = map(bits.subspan(pos, static_cast<std::size_t>(bits_)));
    pos += static_cast<std::size_t>(bits_);
  }
  return g;
}

BitVector QamMapper::demap_grid(const SymbolGrid& grid) const {
  BitVector bits(grid.size() * static_cast<std::size_t>(bits_));
  std::size_t pos = 0;
  for (const auto& v : grid.values()) {
    demap(v, std::span(bits).subspan(pos, static_cast<std::size_t>(bits_)));
    pos += static_cast<std::size_t>(bits_);
  }
  return bits;
}

BitVector random_bits(std::size_t count, Rng& rng) {
  BitVector bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  return bits;
}

}  // namespace mcw
