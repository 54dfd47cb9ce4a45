#pragma once

#include <cstdint>
#include <span>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"
#include "mcwave/pulses.hpp"

namespace mcw {

/// Arrangement of the real and imaginary halves of each QAM symbol.
enum class OqamScheme {
  /// Real part first on every subcarrier.
  smt,
  /// Real part first on even subcarriers, imaginary part first on odd ones.
  phydyas,
};

/// Real OQAM symbols a[m][n] with phase phi[m][n] = quarter_turns * pi/2.
struct OqamGrid {
  Grid<double> a;
  Grid<std::uint8_t> quarter_turns;

  std::size_t rows() const { return a.rows(); }
  std::size_t cols() const { return a.cols(); }
  cplx phase(std::size_t m, std::size_t n) const;
  void validate() const;
};

/// phi[m][n] = (pi/2) * ((m + n) mod 4). Time- and frequency-adjacent
/// cells always differ by a quarter turn.
std::uint8_t oqam_quarter_turns(std::size_t m, std::size_t n);

/// Zero symbols with the standard phase pattern.
OqamGrid make_oqam_grid(std::size_t rows, std::size_t cols);

struct FilterBankConfig {
  int num_subcarriers = 64;  // M
  int overlap = 4;           // K
  PrototypeFilter prototype;
  OqamScheme scheme = OqamScheme::phydyas;

  /// Builds a config around the PHYDYAS prototype for (M, K).
  static FilterBankConfig phydyas(int M, int K = 4, PhydyasP3 p3 = PhydyasP3::symmetric,
                                  OqamScheme scheme = OqamScheme::phydyas);

  int prototype_length() const { return static_cast<int>(prototype.taps.size()); }
  /// D = L_h - 1.
  int delay() const { return prototype_length() - 1; }
  int half_symbol() const { return num_subcarriers / 2; }
  /// Samples between the first input of a row and the instant its analysis
  /// output is complete: D.
  int latency() const { return delay(); }
  /// (rows - 1) * M/2 + L_h.
  std::size_t output_length(std::size_t rows) const;
  void validate() const;
};

OqamGrid oqam_preprocess(const SymbolGrid& grid, OqamScheme scheme);
SymbolGrid oqam_postprocess(const OqamGrid& grid, OqamScheme scheme);

/// Literal double sum
/// s[k] = sum_m sum_n a[m][n] h[k - m M/2] exp(j 2 pi n (k - D/2) / M) exp(j phi[m][n]).
/// O(rows * M * L_h). Reference for sfb_synthesize.
ComplexBuffer direct_synthesize(const OqamGrid& grid, const FilterBankConfig& cfg);

/// Polyphase synthesis filter bank: one M-point IDFT per row, K-tap
/// polyphase branches and overlap-add at stride M/2.
ComplexBuffer sfb_synthesize(const OqamGrid& grid, const FilterBankConfig& cfg);

/// Polyphase analysis filter bank (matched filter of the synthesis pulses),
/// followed by phase compensation and the real part. Phases are assumed to
/// follow oqam_quarter_turns. Row m of the result is aligned with row m of
/// the transmitted grid when rx starts at synthesis sample 0; its last input
/// sample is m M/2 + latency().
OqamGrid afb_analyze(std::span<const cplx> rx, const FilterBankConfig& cfg, std::size_t num_rows);

}  // namespace mcw
