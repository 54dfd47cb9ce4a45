#pragma once

#include <span>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"
#include "mcwave/pulses.hpp"

namespace mcw {

/// Oversampled CMT / SMT modem parameters.
///
/// `stride` is the real-symbol interval T in samples; the prototype must be
/// Nyquist for 2T (samples_per_symbol == 2 * stride), zero-phase and of odd
/// length so that its center tap sits on a sample. Symbol m of the real
/// stream peaks at time m * stride; output sample i corresponds to time
/// i - latency() with latency() the prototype's center index.
struct CmtConfig {
  int num_subcarriers = 8;
  int stride = 8;
  PrototypeFilter prototype;
  /// j^n on subcarrier n, the quarter-turn phase difference between
  /// adjacent subchannels. Disabling it exists to show the interference it
  /// removes.
  bool phase_alternation = true;

  void validate() const;
  int latency() const;
};

/// A[2k][n] = Re A[k][n], A[2k+1][n] = Im A[k][n].
RealSymbolGrid qam_split(const SymbolGrid& grid);
/// Inverse of qam_split. Throws for an odd row count.
SymbolGrid qam_merge(const RealSymbolGrid& grid);

/// Single-sideband CMT transmitter for real symbols:
/// s(t) = sum_m sum_n A'[m][n] j^n q(t - mT) exp(j pi (t - mT) / 2T) exp(j pi n (t - mT) / T).
/// Output length (rows - 1) * stride + prototype length.
ComplexBuffer cmt_modulate(const RealSymbolGrid& grid, const CmtConfig& cfg);

/// Matched filtering with the conjugate subchannel pulses, sampling at
/// m * stride and keeping the real part.
RealSymbolGrid cmt_demodulate(std::span<const cplx> rx, const CmtConfig& cfg, std::size_t num_symbols);

/// CMT for QAM symbols through the split stream with the global frequency
/// shift exp(j pi t / 2T) removed:
/// s'(t) = sum_r sum_n A'[r][n] (-j)^r j^n q(t - rT) exp(j pi n (t - rT) / T),
/// computed as exp(-j pi t / 2T) * cmt_modulate(qam_split(grid)).
ComplexBuffer cmt_qam_modulate(const SymbolGrid& grid, const CmtConfig& cfg);

struct SmtOptions {
  /// Re-applies exp(j pi t / 2T) at the transmitter and removes it at the
  /// receiver. Recovered symbols do not depend on it.
  bool frequency_shift = false;
  /// Reads the in-phase branch with Im{} and the quadrature branch with
  /// Re{}. Only useful to show that the staggering assignment matters.
  bool swap_re_im = false;
};

/// Staggered transmitter: for QAM symbol m the in-phase branch carries
/// Re A at time 2mT with phase (-1)^m and the quadrature branch carries
/// Im A at time (2m+1)T with phase -j (-1)^m, both through the subchannel
/// filters j^n q(t) exp(j pi n t / T). The phases are (-j)^r for the real
/// stream index r, which is what makes the output equal cmt_qam_modulate.
ComplexBuffer smt_modulate(const SymbolGrid& grid, const CmtConfig& cfg, SmtOptions opt = {});

/// Per-branch matched filtering; each branch output is multiplied by the
/// conjugate of its phase and the real part kept (equivalently Re{} on the
/// in-phase instants and Im{} on the half-offset instants).
SymbolGrid smt_demodulate(std::span<const cplx> rx, const CmtConfig& cfg, std::size_t num_symbols,
                          SmtOptions opt = {});

}  // namespace mcw
