#include "mcwave/metrics.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mcw {
namespace {

// |DFT|^2 of zero-padded real taps, fftshifted; freq in cycles/sample.
void padded_power_spectrum(const RealBuffer& taps, std::vector<double>& freq, std::vector<double>& power) {
  const std::size_t nfft = std::bit_ceil(64 * taps.size());
  ComplexBuffer buf(nfft);
  for (std::size_t i = 0; i < taps.size(); ++i) buf[i] = taps[i];
  const auto X = dft(buf);
  freq.resize(nfft);
  power.resize(nfft);
  for (std::size_t i = 0; i < nfft; ++i) {
    const std::size_t src = (i + nfft / 2) % nfft;
    freq[i] = (static_cast<double>(i) - static_cast<double>(nfft / 2)) / static_cast<double>(nfft);
    power[i] = std::norm(X[src]);
  }
}

}  // namespace

Psd estimate_psd(std::span<const cplx> x, std::size_t segment_len, double overlap) {
  if (segment_len == 0) throw std::invalid_argument("segment length must be positive");
  if (segment_len > x.size()) throw std::invalid_argument("segment longer than signal");
  if (!(overlap >= 0.0) || overlap >= 1.0) throw std::invalid_argument("overlap must be in [0, 1)");
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(segment_len) * (1.0 - overlap))));
  std::vector<double> window(segment_len);
  for (std::size_t i = 0; i < segment_len; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(segment_len));

  std::vector<double> acc(segment_len, 0.0);
  ComplexBuffer seg(segment_len);
  for (std::size_t start = 0; start + segment_len <= x.size(); start += hop) {
    for (std::size_t i = 0; i < segment_len; ++i) seg[i] = x[start + i] * window[i];
    const auto X = dft(seg);
    for (std::size_t i = 0; i < segment_len; ++i) acc[i] += std::norm(X[i]);
  }
  double peak = 0.0;
  for (double v : acc) peak = std::max(peak, v);
  if (!(peak > 0.0)) throw NumericError("zero power");

  Psd psd;
  psd.freq.resize(segment_len);
  psd.power_db.resize(segment_len);
  const std::size_t half = segment_len / 2;
  for (std::size_t i = 0; i < segment_len; ++i) {
    const std::size_t src = (i + half) % segment_len;
    psd.freq[i] = (static_cast<double>(i) - static_cast<double>(half)) / static_cast<double>(segment_len);
    // Exact zeros would give -inf; clamp far below any meaningful level.
    psd.power_db[i] = 10.0 * std::log10(std::max(acc[src] / peak, 1e-300));
  }
  return psd;
}

FrequencyResponse frequency_response(const PrototypeFilter& p, int M) {
  if (p.taps.empty()) throw std::invalid_argument("empty prototype");
  if (M < 1) throw std::invalid_argument("M must be positive");
  std::vector<double> f, pw;
  padded_power_spectrum(p.taps, f, pw);
  double peak = 0.0;
  for (double v : pw) peak = std::max(peak, v);
  FrequencyResponse r;
  r.freq.resize(f.size());
  r.magnitude_db.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    r.freq[i] = f[i] * M;
    r.magnitude_db[i] = 10.0 * std::log10(std::max(pw[i] / peak, 1e-300));
  }
  return r;
}

double stopband_attenuation(const PrototypeFilter& p, int M, double edge_spacings) {
  if (p.taps.empty()) throw std::invalid_argument("empty prototype");
  if (M < 1) throw std::invalid_argument("M must be positive");
  std::vector<double> f, pw;
  padded_power_spectrum(p.taps, f, pw);
  double peak = 0.0, stop = -1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    peak = std::max(peak, pw[i]);
    if (std::abs(f[i] * M) > edge_spacings) stop = std::max(stop, pw[i]);
  }
  if (stop < 0.0) throw std::invalid_argument("stopband edge lies beyond the Nyquist frequency");
  if (stop == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak / stop);
}

double evm_db(const SymbolGrid& tx, const SymbolGrid& rx) {
  if (!tx.same_shape(rx)) throw std::invalid_argument("grid dimensions differ");
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    err += std::norm(rx.values()[i] - tx.values()[i]);
    ref += std::norm(tx.values()[i]);
  }
  if (!(ref > 0.0)) throw std::invalid_argument("reference grid has zero power");
  if (err == 0.0) return kEvmFloorDb;
  return std::max(kEvmFloorDb, 10.0 * std::log10(err / ref));
}

double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits) {
  if (tx_bits.size() != rx_bits.size()) throw std::invalid_argument("bit sequences differ in length");
  if (tx_bits.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx_bits.size(); ++i) errors += ((tx_bits[i] ^ rx_bits[i]) & 1) != 0;
  return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

double LeakageMatrix::at(int dm, int dn) const {
  return values.at(static_cast<std::size_t>(dm + extent), static_cast<std::size_t>(dn + extent));
}

double LeakageMatrix::max_off_center() const {
  double m = 0.0;
  for (int dm = -extent; dm <= extent; ++dm)
    for (int dn = -extent; dn <= extent; ++dn)
      if (dm != 0 || dn != 0) m = std::max(m, std::abs(at(dm, dn)));
  return m;
}

double LeakageMatrix::max_beyond_subcarrier(int min_dn) const {
  double m = 0.0;
  for (int dm = -extent; dm <= extent; ++dm)
    for (int dn = -extent; dn <= extent; ++dn)
      if (std::abs(dn) >= min_dn) m = std::max(m, std::abs(at(dm, dn)));
  return m;
}

namespace {

template <typename Read>
LeakageMatrix collect(int extent, std::size_t m0, std::size_t n0, std::size_t rows, std::size_t cols, Read read) {
  LeakageMatrix L{extent, Grid<double>(2 * static_cast<std::size_t>(extent) + 1,
                                       2 * static_cast<std::size_t>(extent) + 1, 0.0)};
  for (int dm = -extent; dm <= extent; ++dm)
    for (int dn = -extent; dn <= extent; ++dn) {
      const long m = static_cast<long>(m0) + dm;
      const long n = static_cast<long>(n0) + dn;
      if (m < 0 || n < 0 || m >= static_cast<long>(rows) || n >= static_cast<long>(cols)) continue;
      L.values(static_cast<std::size_t>(dm + extent), static_cast<std::size_t>(dn + extent)) =
          read(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    }
  return L;
}

void check_extent(int extent) {
  if (extent < 1) throw std::invalid_argument("probe extent must be >= 1");
}

}  // namespace

LeakageMatrix interference_matrix(const OfdmConfig& cfg, int extent, std::size_t shift) {
  check_extent(extent);
  cfg.validate();
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  const std::size_t m0 = static_cast<std::size_t>(extent) + shift;
  const std::size_t rows = m0 + static_cast<std::size_t>(extent) + 1;
  SymbolGrid g(rows, N);
  g(m0, N / 2) = 1.0;
  const auto rx = ofdm_demodulate(ofdm_modulate(g, cfg), cfg, unit_gains(cfg.num_subcarriers));
  return collect(extent, m0, N / 2, rows, N, [&](std::size_t m, std::size_t n) { return std::abs(rx(m, n)); });
}

LeakageMatrix interference_matrix(const CmtConfig& cfg, bool smt, int extent, std::size_t shift) {
  check_extent(extent);
  cfg.validate();
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  const std::size_t n0 = N / 2;
  // Real-stream row of the probe; for SMT an odd row is the quadrature half.
  const std::size_t r0 = 2 * static_cast<std::size_t>(extent) + shift;
  std::size_t rows = r0 + static_cast<std::size_t>(extent) + 1;
  if (smt) {
    rows += rows % 2;
    RealSymbolGrid split(rows, N);
    split(r0, n0) = 1.0;
    const auto grid = qam_merge(split);
    const auto rx = smt_demodulate(smt_modulate(grid, cfg), cfg, grid.rows());
    const auto back = qam_split(rx);
    return collect(extent, r0, n0, rows, N, [&](std::size_t m, std::size_t n) { return back(m, n); });
  }
  RealSymbolGrid g(rows, N);
  g(r0, n0) = 1.0;
  const auto rx = cmt_demodulate(cmt_modulate(g, cfg), cfg, rows);
  return collect(extent, r0, n0, rows, N, [&](std::size_t m, std::size_t n) { return rx(m, n); });
}

LeakageMatrix interference_matrix(const FilterBankConfig& cfg, int extent, std::size_t shift) {
  check_extent(extent);
  cfg.validate();
  const auto M = static_cast<std::size_t>(cfg.num_subcarriers);
  const std::size_t n0 = M / 2;
  const std::size_t m0 = 2 * static_cast<std::size_t>(extent) + shift;
  const std::size_t rows = m0 + static_cast<std::size_t>(extent) + 1;
  auto g = make_oqam_grid(rows, M);
  g.a(m0, n0) = 1.0;
  const auto rx = afb_analyze(sfb_synthesize(g, cfg), cfg, rows);
  return collect(extent, m0, n0, rows, M, [&](std::size_t m, std::size_t n) { return rx.a(m, n); });
}

void MetricsReport::validate() const {
  if (!(ber >= 0.0 && ber <= 1.0)) throw std::invalid_argument("ber outside [0, 1]");
}

nlohmann::ordered_json to_json(const Psd& psd) {
  return {{"freq", psd.freq}, {"power_db", psd.power_db}};
}

nlohmann::ordered_json to_json(const LeakageMatrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.values.rows(); ++r) {
    const auto row = m.values.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"extent", m.extent}, {"values", rows}};
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  r.validate();
  return {{"evm_db", r.evm_db}, {"ber", r.ber}, {"leakage", to_json(r.leakage)}, {"psd", to_json(r.psd)}};
}

void write_psd_csv(const Psd& psd, const std::string& path, std::span<const std::string> header_lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& h : header_lines) out << "# " << h << '\n';
  out << "freq,power_db\n";
  out.precision(12);
  for (std::size_t i = 0; i < psd.freq.size(); ++i) out << psd.freq[i] << ',' << psd.power_db[i] << '\n';
}

}  // namespace mcw
