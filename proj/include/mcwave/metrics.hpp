#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcwave/cmt_smt.hpp"
#include "mcwave/grid.hpp"
#include "mcwave/numerics.hpp"
#include "mcwave/ofdm.hpp"
#include "mcwave/oqam_filterbank.hpp"
#include "mcwave/pulses.hpp"
#include "mcwave/qam.hpp"

namespace mcw {

/// EVM value reported when rx == tx exactly.
inline constexpr double kEvmFloorDb = -300.0;

struct Psd {
  /// Normalized frequency in cycles/sample, ascending over [-0.5, 0.5).
  std::vector<double> freq;
  /// Power in dB relative to the peak bin (peak = 0 dB).
  std::vector<double> power_db;
};

/// Welch estimate: Hann-windowed segments with fractional `overlap` in [0, 1),
/// averaged periodograms, normalized to 0 dB peak.
Psd estimate_psd(std::span<const cplx> x, std::size_t segment_len, double overlap = 0.5);

struct FrequencyResponse {
  /// Frequency in subcarrier spacings (1/M cycles/sample), ascending.
  std::vector<double> freq;
  std::vector<double> magnitude_db;
};

/// |DFT(p)|^2 on a grid zero-padded to at least 64x the prototype length,
/// relative to the peak.
FrequencyResponse frequency_response(const PrototypeFilter& p, int M);

inline constexpr double kDefaultStopbandEdge = 1.5;

/// Main-lobe peak over the largest response beyond `edge_spacings`
/// subcarrier spacings from the center, in dB (positive = attenuation).
double stopband_attenuation(const PrototypeFilter& p, int M, double edge_spacings = kDefaultStopbandEdge);

/// 10 log10(sum |rx - tx|^2 / sum |tx|^2), floored at kEvmFloorDb.
double evm_db(const SymbolGrid& tx, const SymbolGrid& rx);

double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

/// Recovered amplitude around a unit probe symbol, indexed by
/// (time offset, subcarrier offset) in [-extent, extent]^2. For the
/// real-symbol modems (CMT, SMT, OQAM) entries are the recovered real value;
/// for OFDM the magnitude of the recovered complex symbol. Offsets that fall
/// outside the subcarrier range stay 0.
struct LeakageMatrix {
  int extent = 0;
  Grid<double> values;

  double at(int dm, int dn) const;
  /// Largest |entry| excluding (0, 0).
  double max_off_center() const;
  /// Largest |entry| with |dn| >= min_dn.
  double max_beyond_subcarrier(int min_dn) const;
};

enum class ModemKind { ofdm, cmt, smt, oqam };

/// Time shift `shift` moves the probe by that many symbol rows (real-stream
/// rows for the real-symbol modems) to check position invariance.
LeakageMatrix interference_matrix(const OfdmConfig& cfg, int extent, std::size_t shift = 0);
/// `smt` selects the staggered modem; otherwise the real-symbol CMT modem.
LeakageMatrix interference_matrix(const CmtConfig& cfg, bool smt, int extent, std::size_t shift = 0);
LeakageMatrix interference_matrix(const FilterBankConfig& cfg, int extent, std::size_t shift = 0);

struct MetricsReport {
  Psd psd;
  double evm_db = 0.0;
  double ber = 0.0;
  LeakageMatrix leakage;

  void validate() const;
};

nlohmann::ordered_json to_json(const Psd& psd);
nlohmann::ordered_json to_json(const LeakageMatrix& m);
nlohmann::ordered_json to_json(const MetricsReport& r);

/// Writes "freq,power_db" rows after optional '#' header lines.
void write_psd_csv(const Psd& psd, const std::string& path, std::span<const std::string> header_lines = {});

}  // namespace mcw
