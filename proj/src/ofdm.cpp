#include "mcwave/ofdm.hpp"

#include <cmath>
#include <stdexcept>

namespace mcw {

double OfdmConfig::scale() const { return 1.0 / std::sqrt(static_cast<double>(num_subcarriers)); }

void OfdmConfig::validate() const {
  if (num_subcarriers < 1) throw std::invalid_argument("OFDM needs at least one subcarrier");
  if (cp_len < 0 || cp_len >= num_subcarriers)
    throw std::invalid_argument("cyclic prefix length must satisfy 0 <= cp_len < N");
}

ComplexBuffer ofdm_modulate(const SymbolGrid& grid, const OfdmConfig& cfg) {
  cfg.validate();
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  const auto cp = static_cast<std::size_t>(cfg.cp_len);
  if (grid.cols() != N) throw std::invalid_argument("grid width does not match num_subcarriers");
  // idft carries 1/N; the modem convention is 1/sqrt(N).
  const double gain = std::sqrt(static_cast<double>(N));
  ComplexBuffer out;
  out.reserve(grid.rows() * (N + cp));
  for (std::size_t m = 0; m < grid.rows(); ++m) {
    auto x = idft(grid.row(m));
    for (auto& v : x) v *= gain;
    out.insert(out.end(), x.end() - static_cast<long>(cp), x.end());
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

SymbolGrid ofdm_demodulate(std::span<const cplx> rx, const OfdmConfig& cfg, std::span<const cplx> eq,
                           std::size_t sample_offset) {
  cfg.validate();
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  const auto cp = static_cast<std::size_t>(cfg.cp_len);
  const std::size_t sym = N + cp;
  if (eq.size() != N) throw std::invalid_argument("equalizer must have one gain per subcarrier");
  for (const auto& g : eq)
    if (g == cplx{}) throw std::invalid_argument("subcarrier not equalizable");
  if (sample_offset > rx.size() || (rx.size() - sample_offset) % sym != 0)
    throw std::invalid_argument("received length is not a whole number of OFDM symbols");

  const std::size_t num_symbols = (rx.size() - sample_offset) / sym;
  const double scale = cfg.scale();
  SymbolGrid grid(num_symbols, N);
  for (std::size_t m = 0; m < num_symbols; ++m) {
    const auto body = rx.subspan(sample_offset + m * sym + cp, N);
    const auto X = dft(body);
    for (std::size_t n = 0; n < N; ++n) grid(m, n) = X[n] * scale / eq[n];
  }
  return grid;
}

ComplexBuffer unit_gains(int N) { return ComplexBuffer(static_cast<std::size_t>(N), cplx{1.0, 0.0}); }

ComplexBuffer one_tap_gains(std::span<const cplx> channel_taps, int N) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (channel_taps.empty()) throw std::invalid_argument("empty buffer");
  if (channel_taps.size() > static_cast<std::size_t>(N))
    throw std::invalid_argument("channel longer than N");
  ComplexBuffer padded(static_cast<std::size_t>(N));
  std::copy(channel_taps.begin(), channel_taps.end(), padded.begin());
  return dft(padded);
}

}  // namespace mcw
