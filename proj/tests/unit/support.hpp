#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"
#include "mcwave/qam.hpp"

namespace mcw::test {

inline ComplexBuffer random_buffer(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexBuffer x(n);
  for (auto& v : x) v = rng.complex_gaussian(1.0);
  return x;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

inline SymbolGrid random_qam_grid(std::size_t rows, std::size_t cols, int order, std::uint64_t seed) {
  Rng rng(seed);
  QamMapper mapper(order);
  const auto bits = random_bits(rows * cols * static_cast<std::size_t>(mapper.bits_per_symbol()), rng);
  return mapper.map_grid(bits, rows, cols);
}

inline RealSymbolGrid random_real_grid(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  RealSymbolGrid g(rows, cols);
  for (auto& v : g.values()) v = 2.0 * rng.uniform() - 1.0;
  return g;
}

// Direct O(N^2) summation.
inline ComplexBuffer naive_dft(std::span<const cplx> x, int sign) {
  const auto n = x.size();
  ComplexBuffer X(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = sign * 2.0 * kPi * static_cast<double>((k * i) % n) / static_cast<double>(n);
      acc += x[i] * cplx(std::cos(ang), std::sin(ang));
    }
    X[k] = acc;
  }
  return X;
}

inline ComplexBuffer naive_convolve(std::span<const cplx> x, std::span<const cplx> h) {
  ComplexBuffer y(x.size() + h.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  return y;
}

}  // namespace mcw::test
