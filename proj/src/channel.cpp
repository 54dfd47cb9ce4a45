#include "mcwave/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcw {

void ChannelModel::validate() const {
  if (taps.empty()) throw std::invalid_argument("channel needs at least one tap");
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
}

ComplexBuffer apply_channel(std::span<const cplx> tx, const ChannelModel& ch) {
  ch.validate();
  if (tx.empty()) throw std::invalid_argument("empty buffer");
  auto y = convolve(tx, ch.taps);
  y.resize(tx.size());
  if (ch.noise_variance > 0.0) {
    Rng rng(ch.seed);
    for (auto& v : y) v += rng.complex_gaussian(ch.noise_variance);
  }
  return y;
}

double noise_variance_for_snr(std::span<const cplx> signal, double snr_db) {
  if (signal.empty()) throw std::invalid_argument("empty buffer");
  double p = 0.0;
  for (const auto& v : signal) p += std::norm(v);
  p /= static_cast<double>(signal.size());
  return p / std::pow(10.0, snr_db / 10.0);
}

ComplexBuffer read_channel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel profile " + path);
  ComplexBuffer taps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (auto& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    double re = 0.0, im = 0.0;
    if (!(ss >> re)) throw std::invalid_argument("malformed channel line: " + line);
    ss >> im;
    taps.emplace_back(re, im);
  }
  if (taps.empty()) throw std::invalid_argument("channel profile has no taps: " + path);
  return taps;
}

void write_channel_csv(std::span<const cplx> taps, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  for (const auto& t : taps) out << t.real() << ',' << t.imag() << '\n';
}

}  // namespace mcw
