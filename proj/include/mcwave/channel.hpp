#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "mcwave/numerics.hpp"

namespace mcw {

/// Static multipath FIR channel plus AWGN.
struct ChannelModel {
  ComplexBuffer taps{cplx{1.0, 0.0}};
  /// Total complex noise variance per sample, split evenly over I and Q.
  double noise_variance = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Linear convolution with the taps truncated to len(tx), plus noise drawn
/// from a fresh Rng(ch.seed).
ComplexBuffer apply_channel(std::span<const cplx> tx, const ChannelModel& ch);

/// Noise variance giving `snr_db` relative to the mean power of `signal`.
double noise_variance_for_snr(std::span<const cplx> signal, double snr_db);

/// One tap per line: "real,imag". Lines starting with '#' are comments.
ComplexBuffer read_channel_csv(const std::string& path);
void write_channel_csv(std::span<const cplx> taps, const std::string& path);

}  // namespace mcw
