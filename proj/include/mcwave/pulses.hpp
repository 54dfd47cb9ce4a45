#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"

namespace mcw {

/// Real prototype impulse response q / p[m] sampled at `samples_per_symbol`
/// samples per symbol period.
struct PrototypeFilter {
  RealBuffer taps;
  int samples_per_symbol = 1;
  std::string name;

  std::size_t length() const { return taps.size(); }
  double energy() const;
  bool is_symmetric(double tol = 1e-12) const;
};

/// N complex pulses h_n[k] sharing one symbol stride.
struct PulseSet {
  std::vector<ComplexBuffer> pulses;
  int stride = 1;

  int num_subcarriers() const { return static_cast<int>(pulses.size()); }
  std::size_t pulse_length() const { return pulses.empty() ? 0 : pulses.front().size(); }
};

/// Residuals of the ordinary and generalized Nyquist criteria evaluated at
/// symbol-spaced lags -max_lag..max_lag.
struct NyquistReport {
  std::vector<double> ordinary_residuals;
  /// N x N, zero diagonal. Empty for a single-pulse set.
  Grid<double> cross_residuals;
  int max_lag = 0;

  double max_ordinary() const;
  double max_cross() const;
  /// max |cross(n, n+1)| over adjacent pairs (0 when N < 2).
  double max_adjacent_cross() const;
  /// max |cross(n, l)| over |n - l| >= min_distance.
  double max_cross_beyond(int min_distance) const;
  double max_residual() const { return std::max(max_ordinary(), max_cross()); }
};

enum class PhydyasP3 {
  /// P3 = sqrt(1 - P1^2), from the power-complementary rule P[k]^2 + P[K-k]^2 = 1.
  symmetric,
  /// P3 = sqrt(1 - P2), the constant as typeset in the source formula.
  printed,
};

enum class CmtForm { cosine, single_sideband };

PrototypeFilter rect_prototype(int samples_per_symbol);

PrototypeFilter rrc_prototype(double rolloff, int span_symbols, int samples_per_symbol);

/// Frequency-sampled PHYDYAS prototype of length K*M - 1 (K = 4 only).
/// `normalize` scales the taps to unit energy.
PrototypeFilter phydyas_prototype(int M, int K = 4, PhydyasP3 p3 = PhydyasP3::symmetric,
                                  bool normalize = true);

/// The four frequency-domain coefficients P[0..3] used by phydyas_prototype.
std::vector<double> phydyas_coefficients(PhydyasP3 p3 = PhydyasP3::symmetric);

PulseSet build_ofdm_pulseset(int N, int samples_per_symbol);

/// h_n[k] = q[k] exp(j 2 pi n k / stride), stride = q.samples_per_symbol.
PulseSet build_modified_ofdm_pulseset(const PrototypeFilter& q, int N);

/// CMT pulses for a prototype Nyquist at twice the symbol stride. Time t is
/// measured from the prototype's center tap.
///
/// cosine:          h_n = sqrt(2) q(t) cos((n + 1/2) pi t / T + pi/4 + psi_n)
/// single_sideband: h_n = q(t) exp(j pi t / 2T) exp(j n pi t / T) exp(j psi_n)
///
/// psi_n = pi/2 on odd n when `phase_alternation` is set, 0 otherwise. For
/// the single-sideband form this is the j multiplier on odd pulses; for the
/// real cosine form the same quarter turn is applied inside the cosine.
PulseSet build_cmt_pulseset(const PrototypeFilter& q, int N, CmtForm form,
                            bool phase_alternation);

NyquistReport verify_nyquist(const PulseSet& ps, int max_lag);

/// Correlation (h_a * conj(h_b)(-t))(lag), i.e. sum_i a[i] conj(b[i - lag]).
cplx pulse_correlation(std::span<const cplx> a, std::span<const cplx> b, long lag);

/// max |Re{Q(w - pi/2T) conj(Q(w + pi/2T))}| / max |Q|^2 over w in [-pi/T, pi/T],
/// Q the zero-phase spectrum of q (referenced to its center), T = half the
/// prototype's symbol period. `quarter_turn` multiplies the second shifted
/// copy by j.
double phase_constraint_residual(const PrototypeFilter& q, bool quarter_turn = false);

/// One real tap per line.
void write_prototype_csv(const PrototypeFilter& q, const std::string& path,
                         std::span<const std::string> header_lines = {});
PrototypeFilter read_prototype_csv(const std::string& path, int samples_per_symbol,
                                   std::string name = "csv");

}  // namespace mcw
