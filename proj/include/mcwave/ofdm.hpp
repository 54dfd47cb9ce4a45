#pragma once

#include <span>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"

namespace mcw {

/// CP-OFDM parameters. The modulator scales by 1/sqrt(N) so that
/// modulation and demodulation are exact adjoints.
struct OfdmConfig {
  int num_subcarriers = 64;
  int cp_len = 0;

  int symbol_length() const { return num_subcarriers + cp_len; }
  double scale() const;
  void validate() const;
};

/// Per symbol: x[k] = (1/sqrt(N)) sum_n X[n] exp(j 2 pi n k / N), prefixed by
/// its last cp_len samples. Output length num_symbols * (N + cp_len).
ComplexBuffer ofdm_modulate(const SymbolGrid& grid, const OfdmConfig& cfg);

/// Drops the prefix, applies a 1/sqrt(N)-scaled forward DFT and divides each
/// subcarrier by its equalizer gain. `sample_offset` skips leading samples
/// (frame alignment is assumed, the offset exists for experiments).
SymbolGrid ofdm_demodulate(std::span<const cplx> rx, const OfdmConfig& cfg,
                           std::span<const cplx> eq, std::size_t sample_offset = 0);

/// Unit equalizer (identity channel).
ComplexBuffer unit_gains(int N);

/// N-point DFT of the zero-padded channel impulse response.
ComplexBuffer one_tap_gains(std::span<const cplx> channel_taps, int N);

}  // namespace mcw
