#include "mcwave/oqam_filterbank.hpp"

#include <stdexcept>

namespace mcw {
namespace {

cplx quarter_turn(unsigned q) {
  switch (q % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// exp(j 2 pi num / den) with num reduced modulo den.
cplx turn(long num, long den) {
  const long r = ((num % den) + den) % den;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(den));
}

bool imag_first(OqamScheme scheme, std::size_t n) { return scheme == OqamScheme::phydyas && n % 2 == 1; }

void check_grid(const OqamGrid& grid, const FilterBankConfig& cfg) {
  cfg.validate();
  grid.validate();
  if (grid.cols() != static_cast<std::size_t>(cfg.num_subcarriers))
    throw std::invalid_argument("grid width does not match num_subcarriers");
}

}  // namespace

cplx OqamGrid::phase(std::size_t m, std::size_t n) const { return quarter_turn(quarter_turns(m, n)); }

void OqamGrid::validate() const {
  if (!a.same_shape(Grid<double>(quarter_turns.rows(), quarter_turns.cols())))
    throw std::invalid_argument("symbol and phase arrays differ in shape");
  for (std::size_t m = 0; m < rows(); ++m)
    for (std::size_t n = 0; n < cols(); ++n) {
      const unsigned q = quarter_turns(m, n);
      if (q > 3) throw std::invalid_argument("phase must be a multiple of pi/2 in [0, 2pi)");
      if (m + 1 < rows() && ((q + quarter_turns(m + 1, n)) % 2) == 0)
        throw std::invalid_argument("time-adjacent OQAM phases must differ by an odd quarter turn");
      if (n + 1 < cols() && ((q + quarter_turns(m, n + 1)) % 2) == 0)
        throw std::invalid_argument("frequency-adjacent OQAM phases must differ by an odd quarter turn");
    }
}

std::uint8_t oqam_quarter_turns(std::size_t m, std::size_t n) { return static_cast<std::uint8_t>((m + n) % 4); }

OqamGrid make_oqam_grid(std::size_t rows, std::size_t cols) {
  OqamGrid g{Grid<double>(rows, cols, 0.0), Grid<std::uint8_t>(rows, cols, 0)};
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t n = 0; n < cols; ++n) g.quarter_turns(m, n) = oqam_quarter_turns(m, n);
  return g;
}

FilterBankConfig FilterBankConfig::phydyas(int M, int K, PhydyasP3 p3, OqamScheme scheme) {
  return {M, K, phydyas_prototype(M, K, p3), scheme};
}

std::size_t FilterBankConfig::output_length(std::size_t rows) const {
  if (rows == 0) return 0;
  return (rows - 1) * static_cast<std::size_t>(half_symbol()) + prototype.taps.size();
}

void FilterBankConfig::validate() const {
  if (num_subcarriers < 2 || num_subcarriers % 2 != 0)
    throw std::invalid_argument("filter bank needs an even number of subcarriers M >= 2");
  if (overlap < 1) throw std::invalid_argument("overlap factor K must be positive");
  if (prototype_length() != overlap * num_subcarriers - 1)
    throw std::invalid_argument("prototype length must be K*M - 1");
  if (delay() % 2 != 0) throw std::invalid_argument("D = L_h - 1 must be even");
}

OqamGrid oqam_preprocess(const SymbolGrid& grid, OqamScheme scheme) {
  OqamGrid out = make_oqam_grid(2 * grid.rows(), grid.cols());
  for (std::size_t k = 0; k < grid.rows(); ++k)
    for (std::size_t n = 0; n < grid.cols(); ++n) {
      const cplx A = grid(k, n);
      const bool swap = imag_first(scheme, n);
      out.a(2 * k, n) = swap ? A.imag() : A.real();
      out.a(2 * k + 1, n) = swap ? A.real() : A.imag();
    }
  return out;
}

SymbolGrid oqam_postprocess(const OqamGrid& grid, OqamScheme scheme) {
  if (grid.rows() % 2 != 0) throw std::invalid_argument("OQAM grid needs an even number of rows");
  SymbolGrid out(grid.rows() / 2, grid.cols());
  for (std::size_t k = 0; k < out.rows(); ++k)
    for (std::size_t n = 0; n < grid.cols(); ++n) {
      const double first = grid.a(2 * k, n);
      const double second = grid.a(2 * k + 1, n);
      out(k, n) = imag_first(scheme, n) ? cplx{second, first} : cplx{first, second};
    }
  return out;
}

ComplexBuffer direct_synthesize(const OqamGrid& grid, const FilterBankConfig& cfg) {
  check_grid(grid, cfg);
  const long M = cfg.num_subcarriers;
  const long half = cfg.half_symbol();
  const long Dh = cfg.delay() / 2;
  const auto& h = cfg.prototype.taps;
  const long L = static_cast<long>(h.size());
  ComplexBuffer s(cfg.output_length(grid.rows()));
  for (long k = 0; k < static_cast<long>(s.size()); ++k) {
    cplx acc{};
    for (long m = 0; m < static_cast<long>(grid.rows()); ++m) {
      const long i = k - m * half;
      if (i < 0 || i >= L) continue;
      for (long n = 0; n < M; ++n) {
        const double a = grid.a(m, n);
        if (a == 0.0) continue;
        acc += a * h[i] * turn(n * (k - Dh), M) * grid.phase(m, n);
      }
    }
    s[k] = acc;
  }
  return s;
}

ComplexBuffer sfb_synthesize(const OqamGrid& grid, const FilterBankConfig& cfg) {
  check_grid(grid, cfg);
  const long M = cfg.num_subcarriers;
  const long half = cfg.half_symbol();
  const long Dh = cfg.delay() / 2;
  const auto& h = cfg.prototype.taps;
  const long L = static_cast<long>(h.size());
  ComplexBuffer s(cfg.output_length(grid.rows()));
  ComplexBuffer c(static_cast<std::size_t>(M));
  for (long m = 0; m < static_cast<long>(grid.rows()); ++m) {
    // The modulation phase exp(j 2 pi n (k - D/2) / M) runs on absolute time
    // k. Writing k = m M/2 + i splits it into a per-row factor
    // (-1)^(n m) exp(-j 2 pi n (D/2) / M), folded into the IDFT input here,
    // and exp(j 2 pi n i / M), which the IDFT itself supplies.
    for (long n = 0; n < M; ++n)
      c[n] = grid.a(m, n) * grid.phase(m, n) * ((n * m) % 2 ? -1.0 : 1.0) * turn(-n * Dh, M);
    auto x = idft(c);
    // Polyphase branch p feeds outputs m M/2 + p + q M through h[p + q M].
    const double gain = static_cast<double>(M);
    for (long p = 0; p < M; ++p) {
      const cplx xp = x[p] * gain;
      for (long i = p; i < L; i += M) s[m * half + i] += h[i] * xp;
    }
  }
  return s;
}

OqamGrid afb_analyze(std::span<const cplx> rx, const FilterBankConfig& cfg, std::size_t num_rows) {
  cfg.validate();
  const long M = cfg.num_subcarriers;
  const long half = cfg.half_symbol();
  const long Dh = cfg.delay() / 2;
  const auto& h = cfg.prototype.taps;
  const long L = static_cast<long>(h.size());
  if (rx.size() < cfg.output_length(num_rows))
    throw std::invalid_argument("received buffer does not cover the synthesis support of the requested rows");
  OqamGrid out = make_oqam_grid(num_rows, static_cast<std::size_t>(M));
  ComplexBuffer v(static_cast<std::size_t>(M));
  for (long m = 0; m < static_cast<long>(num_rows); ++m) {
    std::fill(v.begin(), v.end(), cplx{});
    for (long p = 0; p < M; ++p)
      for (long i = p; i < L; i += M) v[p] += rx[m * half + i] * h[i];
    const auto Y = dft(v);
    for (long n = 0; n < M; ++n) {
      const cplx comp = ((n * m) % 2 ? -1.0 : 1.0) * turn(n * Dh, M) * std::conj(out.phase(m, n));
      out.a(m, n) = (comp * Y[n]).real();
    }
  }
  return out;
}

}  // namespace mcw
