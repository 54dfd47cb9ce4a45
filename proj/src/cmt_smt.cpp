#include "mcwave/cmt_smt.hpp"

#include <stdexcept>

namespace mcw {
namespace {

constexpr cplx kJ{0.0, 1.0};

cplx j_pow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// exp(j pi num / den), with num reduced modulo 2 den first.
cplx half_turn_phase(long num, long den) {
  const long r = ((num % (2 * den)) + 2 * den) % (2 * den);
  return std::polar(1.0, kPi * static_cast<double>(r) / static_cast<double>(den));
}

// filters[n][u] = j^n q[u] exp(j pi n (u - c) / T) * (ssb ? exp(j pi (u - c) / 2T) : 1)
std::vector<ComplexBuffer> subchannel_filters(const CmtConfig& cfg, bool ssb_shift) {
  const auto& q = cfg.prototype.taps;
  const long c = cfg.latency();
  const long T = cfg.stride;
  std::vector<ComplexBuffer> f(static_cast<std::size_t>(cfg.num_subcarriers), ComplexBuffer(q.size()));
  for (int n = 0; n < cfg.num_subcarriers; ++n) {
    const cplx rot = cfg.phase_alternation ? j_pow(n) : cplx{1.0, 0.0};
    for (std::size_t u = 0; u < q.size(); ++u) {
      const long t = static_cast<long>(u) - c;
      cplx v = q[u] * rot * half_turn_phase(n * t, T);
      if (ssb_shift) v *= half_turn_phase(t, 2 * T);
      f[n][u] = v;
    }
  }
  return f;
}

// out[start + u] += weight * sum_n symbols[n] * filters[n][u]
void add_symbol_row(ComplexBuffer& out, std::size_t start, std::span<const double> symbols, cplx weight,
                    const std::vector<ComplexBuffer>& filters) {
  const std::size_t L = filters.front().size();
  for (std::size_t n = 0; n < symbols.size(); ++n) {
    if (symbols[n] == 0.0) continue;
    const cplx a = weight * symbols[n];
    const auto& f = filters[n];
    for (std::size_t u = 0; u < L; ++u) out[start + u] += a * f[u];
  }
}

cplx matched_output(std::span<const cplx> rx, std::size_t start, const ComplexBuffer& filter) {
  cplx acc{};
  for (std::size_t u = 0; u < filter.size(); ++u) acc += rx[start + u] * std::conj(filter[u]);
  return acc;
}

ComplexBuffer shifted(std::span<const cplx> x, long latency, long T, int direction) {
  ComplexBuffer y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] *= half_turn_phase(direction * (static_cast<long>(i) - latency), 2 * T);
  return y;
}

void require_zero_phase(const CmtConfig& cfg) {
  if (!cfg.prototype.is_symmetric(1e-12))
    throw std::invalid_argument("SMT demodulation requires a real zero-phase (symmetric) prototype");
}

}  // namespace

void CmtConfig::validate() const {
  if (num_subcarriers < 1) throw std::invalid_argument("CMT needs at least one subcarrier");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  if (prototype.taps.empty()) throw std::invalid_argument("empty prototype");
  if (prototype.samples_per_symbol != 2 * stride)
    throw std::invalid_argument("prototype must be Nyquist for 2T: samples_per_symbol != 2 * stride");
  if (prototype.taps.size() % 2 == 0)
    throw std::invalid_argument("prototype length must be odd so its center lies on a sample");
  if (num_subcarriers >= 2 * stride)
    throw std::invalid_argument("num_subcarriers must be below 2 * stride to avoid spectral wrap-around");
}

int CmtConfig::latency() const { return static_cast<int>((prototype.taps.size() - 1) / 2); }

RealSymbolGrid qam_split(const SymbolGrid& grid) {
  RealSymbolGrid out(2 * grid.rows(), grid.cols());
  for (std::size_t k = 0; k < grid.rows(); ++k)
    for (std::size_t n = 0; n < grid.cols(); ++n) {
      out(2 * k, n) = grid(k, n).real();
      out(2 * k + 1, n) = grid(k, n).imag();
    }
  return out;
}

SymbolGrid qam_merge(const RealSymbolGrid& grid) {
  if (grid.rows() % 2 != 0) throw std::invalid_argument("qam_merge needs an even number of rows");
  SymbolGrid out(grid.rows() / 2, grid.cols());
  for (std::size_t k = 0; k < out.rows(); ++k)
    for (std::size_t n = 0; n < grid.cols(); ++n) out(k, n) = {grid(2 * k, n), grid(2 * k + 1, n)};
  return out;
}

ComplexBuffer cmt_modulate(const RealSymbolGrid& grid, const CmtConfig& cfg) {
  cfg.validate();
  if (grid.cols() != static_cast<std::size_t>(cfg.num_subcarriers))
    throw std::invalid_argument("grid width does not match num_subcarriers");
  if (grid.rows() == 0) return {};
  const auto filters = subchannel_filters(cfg, true);
  const std::size_t T = static_cast<std::size_t>(cfg.stride);
  ComplexBuffer out((grid.rows() - 1) * T + cfg.prototype.taps.size());
  for (std::size_t m = 0; m < grid.rows(); ++m) add_symbol_row(out, m * T, grid.row(m), 1.0, filters);
  return out;
}

RealSymbolGrid cmt_demodulate(std::span<const cplx> rx, const CmtConfig& cfg, std::size_t num_symbols) {
  cfg.validate();
  const std::size_t T = static_cast<std::size_t>(cfg.stride);
  const std::size_t L = cfg.prototype.taps.size();
  if (num_symbols > 0 && rx.size() < (num_symbols - 1) * T + L)
    throw std::invalid_argument("received buffer too short for the requested number of symbols");
  const auto filters = subchannel_filters(cfg, true);
  RealSymbolGrid out(num_symbols, static_cast<std::size_t>(cfg.num_subcarriers));
  for (std::size_t m = 0; m < num_symbols; ++m)
    for (std::size_t n = 0; n < filters.size(); ++n) out(m, n) = matched_output(rx, m * T, filters[n]).real();
  return out;
}

ComplexBuffer cmt_qam_modulate(const SymbolGrid& grid, const CmtConfig& cfg) {
  auto s = cmt_modulate(qam_split(grid), cfg);
  return shifted(s, cfg.latency(), cfg.stride, -1);
}

ComplexBuffer smt_modulate(const SymbolGrid& grid, const CmtConfig& cfg, SmtOptions opt) {
  cfg.validate();
  if (grid.cols() != static_cast<std::size_t>(cfg.num_subcarriers))
    throw std::invalid_argument("grid width does not match num_subcarriers");
  if (grid.rows() == 0) return {};
  const auto filters = subchannel_filters(cfg, false);
  const std::size_t T = static_cast<std::size_t>(cfg.stride);
  const std::size_t N = grid.cols();
  ComplexBuffer out((2 * grid.rows() - 1) * T + cfg.prototype.taps.size());
  std::vector<double> re(N), im(N);
  for (std::size_t m = 0; m < grid.rows(); ++m) {
    for (std::size_t n = 0; n < N; ++n) {
      re[n] = grid(m, n).real();
      im[n] = grid(m, n).imag();
    }
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    add_symbol_row(out, 2 * m * T, re, sign, filters);
    add_symbol_row(out, (2 * m + 1) * T, im, -kJ * sign, filters);
  }
  if (opt.frequency_shift) out = shifted(out, cfg.latency(), cfg.stride, +1);
  return out;
}

SymbolGrid smt_demodulate(std::span<const cplx> rx, const CmtConfig& cfg, std::size_t num_symbols,
                          SmtOptions opt) {
  cfg.validate();
  require_zero_phase(cfg);
  const std::size_t T = static_cast<std::size_t>(cfg.stride);
  const std::size_t L = cfg.prototype.taps.size();
  if (num_symbols > 0 && rx.size() < (2 * num_symbols - 1) * T + L)
    throw std::invalid_argument("received buffer too short for the requested number of symbols");
  ComplexBuffer local;
  if (opt.frequency_shift) {
    local = shifted(rx, cfg.latency(), cfg.stride, -1);
    rx = local;
  }
  const auto filters = subchannel_filters(cfg, false);
  auto pick = [&](cplx z) { return opt.swap_re_im ? z.imag() : z.real(); };
  SymbolGrid out(num_symbols, static_cast<std::size_t>(cfg.num_subcarriers));
  for (std::size_t m = 0; m < num_symbols; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const cplx in_phase = sign;
    const cplx quadrature = -kJ * sign;
    for (std::size_t n = 0; n < filters.size(); ++n) {
      const double a_re = pick(std::conj(in_phase) * matched_output(rx, 2 * m * T, filters[n]));
      const double a_im = pick(std::conj(quadrature) * matched_output(rx, (2 * m + 1) * T, filters[n]));
      out(m, n) = {a_re, a_im};
    }
  }
  return out;
}

}  // namespace mcw
