#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace mcw {

using cplx = std::complex<double>;

/// Baseband sample stream. Values are dimensionless complex amplitudes.
using ComplexBuffer = std::vector<cplx>;
using RealBuffer = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown when an operation's numeric result is undefined for its input
/// (zero reference power, non-finite output, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unnormalized forward DFT: X[n] = sum_k x[k] exp(-j 2 pi n k / N).
ComplexBuffer dft(std::span<const cplx> x);

/// Inverse DFT with 1/N scaling, so idft(dft(x)) == x.
ComplexBuffer idft(std::span<const cplx> X);

/// Full linear convolution, length len(x) + len(h) - 1.
ComplexBuffer convolve(std::span<const cplx> x, std::span<const cplx> h);

ComplexBuffer to_complex(std::span<const double> x);

bool all_finite(std::span<const cplx> x);

/// Deterministic generator: mt19937_64 (bit-exact across platforms by the
/// C++ standard) with hand-written uniform and Box-Muller transforms, so the
/// stream does not depend on a standard library's distribution classes.
class Rng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64+box_muller";

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cplx complex_gaussian(double variance);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Derives an independent per-trial seed from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace mcw
