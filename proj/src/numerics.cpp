#include "mcwave/numerics.hpp"

#include <bit>
#include <cmath>

namespace mcw {
namespace {

// In-place iterative radix-2 transform. sign = -1 forward, +1 inverse (no scaling).
void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles evaluated directly rather than by recurrence to keep the
    // round-off at O(eps log N).
    std::vector<cplx> w(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double ang = sign * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(len);
      w[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * w[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

// Bluestein chirp-z for arbitrary lengths.
std::vector<cplx> fft_any(std::span<const cplx> x, int sign) {
  const std::size_t n = x.size();
  if (std::has_single_bit(n)) {
    std::vector<cplx> a(x.begin(), x.end());
    fft_pow2(a, sign);
    return a;
  }
  const std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small and exact.
    const auto k2 = static_cast<double>((k * k) % (2 * n));
    const double ang = sign * kPi * k2 / static_cast<double>(n);
    chirp[k] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<cplx> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  fft_pow2(a, -1);
  fft_pow2(b, -1);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_pow2(a, +1);
  std::vector<cplx> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

}  // namespace

ComplexBuffer dft(std::span<const cplx> x) {
  if (x.empty()) throw std::invalid_argument("empty buffer");
  return fft_any(x, -1);
}

ComplexBuffer idft(std::span<const cplx> X) {
  if (X.empty()) throw std::invalid_argument("empty buffer");
  auto out = fft_any(X, +1);
  const double scale = 1.0 / static_cast<double>(X.size());
  for (auto& v : out) v *= scale;
  return out;
}

ComplexBuffer convolve(std::span<const cplx> x, std::span<const cplx> h) {
  if (x.empty() || h.empty()) throw std::invalid_argument("empty buffer");
  ComplexBuffer y(x.size() + h.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  return y;
}

ComplexBuffer to_complex(std::span<const double> x) { return {x.begin(), x.end()}; }

bool all_finite(std::span<const cplx> x) {
  for (const auto& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

cplx Rng::complex_gaussian(double variance) {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double sigma = std::sqrt(variance / 2.0);
  return {sigma * r * std::cos(2.0 * kPi * u2), sigma * r * std::sin(2.0 * kPi * u2)};
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Rejection sampling avoids modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mcw
