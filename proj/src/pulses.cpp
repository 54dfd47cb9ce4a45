#include "mcwave/pulses.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcw {
namespace {

void scale_to_unit_energy(RealBuffer& taps) {
  double e = 0.0;
  for (double t : taps) e += t * t;
  if (e <= 0.0) throw NumericError("prototype has zero energy");
  const double s = 1.0 / std::sqrt(e);
  for (double& t : taps) t *= s;
}

// Mirrors the first half onto the second so symmetric designs are exactly
// symmetric regardless of libm rounding.
void force_symmetry(RealBuffer& taps) {
  const std::size_t L = taps.size();
  for (std::size_t m = 0; m < L / 2; ++m) taps[L - 1 - m] = taps[m];
}

double rrc_value(double t, double beta) {
  constexpr double eps = 1e-10;
  if (std::abs(t) < eps) return 1.0 - beta + 4.0 * beta / kPi;
  if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < eps) {
    const double a = kPi / (4.0 * beta);
    return beta / std::sqrt(2.0) *
           ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
  }
  const double num = std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
  const double den = kPi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
  return num / den;
}

}  // namespace

double PrototypeFilter::energy() const {
  double e = 0.0;
  for (double t : taps) e += t * t;
  return e;
}

bool PrototypeFilter::is_symmetric(double tol) const {
  const std::size_t L = taps.size();
  for (std::size_t m = 0; m < L; ++m)
    if (std::abs(taps[m] - taps[L - 1 - m]) > tol) return false;
  return true;
}

double NyquistReport::max_ordinary() const {
  double m = 0.0;
  for (double v : ordinary_residuals) m = std::max(m, v);
  return m;
}

double NyquistReport::max_cross() const {
  double m = 0.0;
  for (double v : cross_residuals.values()) m = std::max(m, v);
  return m;
}

double NyquistReport::max_adjacent_cross() const {
  double m = 0.0;
  for (std::size_t n = 0; n + 1 < cross_residuals.rows(); ++n)
    m = std::max({m, cross_residuals(n, n + 1), cross_residuals(n + 1, n)});
  return m;
}

double NyquistReport::max_cross_beyond(int min_distance) const {
  double m = 0.0;
  const auto N = static_cast<long>(cross_residuals.rows());
  for (long n = 0; n < N; ++n)
    for (long l = 0; l < N; ++l)
      if (std::abs(n - l) >= min_distance) m = std::max(m, cross_residuals(n, l));
  return m;
}

PrototypeFilter rect_prototype(int samples_per_symbol) {
  if (samples_per_symbol < 1) throw std::invalid_argument("rect prototype needs samples_per_symbol >= 1");
  const double v = 1.0 / std::sqrt(static_cast<double>(samples_per_symbol));
  return {RealBuffer(static_cast<std::size_t>(samples_per_symbol), v), samples_per_symbol, "rect"};
}

PrototypeFilter rrc_prototype(double rolloff, int span_symbols, int samples_per_symbol) {
  if (!(rolloff > 0.0) || rolloff > 1.0) throw std::invalid_argument("rolloff must be in (0, 1]");
  if (span_symbols < 1 || samples_per_symbol < 1)
    throw std::invalid_argument("rrc prototype needs positive span and samples_per_symbol");
  const std::size_t L = static_cast<std::size_t>(span_symbols) * samples_per_symbol + 1;
  const double center = static_cast<double>(L - 1) / 2.0;
  RealBuffer taps(L);
  for (std::size_t i = 0; i < L; ++i)
    taps[i] = rrc_value((static_cast<double>(i) - center) / samples_per_symbol, rolloff);
  force_symmetry(taps);
  scale_to_unit_energy(taps);
  return {std::move(taps), samples_per_symbol, "rrc"};
}

std::vector<double> phydyas_coefficients(PhydyasP3 p3) {
  const double p1 = 0.97195983;
  const double p2 = 1.0 / std::sqrt(2.0);
  const double p3v = p3 == PhydyasP3::symmetric ? std::sqrt(1.0 - p1 * p1) : std::sqrt(1.0 - p2);
  return {1.0, p1, p2, p3v};
}

PrototypeFilter phydyas_prototype(int M, int K, PhydyasP3 p3, bool normalize) {
  if (K != 4) throw std::invalid_argument("no coefficient table");
  if (M < 2) throw std::invalid_argument("PHYDYAS prototype needs M >= 2");
  const auto P = phydyas_coefficients(p3);
  const int KM = K * M;
  RealBuffer taps(static_cast<std::size_t>(KM - 1));
  for (int m = 0; m < KM - 1; ++m) {
    double acc = P[0];
    for (int k = 1; k < K; ++k) {
      const double sign = (k % 2) ? -1.0 : 1.0;
      acc += 2.0 * sign * P[k] * std::cos(2.0 * kPi * k * (m + 1) / KM);
    }
    taps[m] = acc;
  }
  force_symmetry(taps);
  if (normalize) scale_to_unit_energy(taps);
  return {std::move(taps), M, p3 == PhydyasP3::symmetric ? "phydyas" : "phydyas-printed-p3"};
}

PulseSet build_ofdm_pulseset(int N, int samples_per_symbol) {
  if (N < 2) throw std::invalid_argument("pulse set needs N >= 2");
  return build_modified_ofdm_pulseset(rect_prototype(samples_per_symbol), N);
}

PulseSet build_modified_ofdm_pulseset(const PrototypeFilter& q, int N) {
  if (N < 2) throw std::invalid_argument("pulse set needs N >= 2");
  if (q.taps.empty()) throw std::invalid_argument("empty prototype");
  const int stride = q.samples_per_symbol;
  PulseSet ps;
  ps.stride = stride;
  ps.pulses.resize(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    auto& h = ps.pulses[n];
    h.resize(q.taps.size());
    for (std::size_t k = 0; k < q.taps.size(); ++k) {
      // Reduce n*k modulo the stride so the phase argument stays exact.
      const auto r = static_cast<double>((static_cast<long>(n) * static_cast<long>(k)) % stride);
      h[k] = q.taps[k] * std::polar(1.0, 2.0 * kPi * r / stride);
    }
  }
  return ps;
}

PulseSet build_cmt_pulseset(const PrototypeFilter& q, int N, CmtForm form, bool phase_alternation) {
  if (N < 2) throw std::invalid_argument("pulse set needs N >= 2");
  if (q.samples_per_symbol % 2 != 0)
    throw std::invalid_argument("CMT prototype must be Nyquist for 2T (even samples_per_symbol)");
  const int stride = q.samples_per_symbol / 2;
  const double center = static_cast<double>(q.taps.size() - 1) / 2.0;
  PulseSet ps;
  ps.stride = stride;
  ps.pulses.resize(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    const double psi = (phase_alternation && n % 2 == 1) ? kPi / 2.0 : 0.0;
    auto& h = ps.pulses[n];
    h.resize(q.taps.size());
    for (std::size_t k = 0; k < q.taps.size(); ++k) {
      const double t = (static_cast<double>(k) - center) / stride;  // in units of T
      const double arg = (n + 0.5) * kPi * t;
      if (form == CmtForm::cosine) {
        h[k] = std::sqrt(2.0) * q.taps[k] * std::cos(arg + kPi / 4.0 + psi);
      } else {
        h[k] = q.taps[k] * std::polar(1.0, arg + psi);
      }
    }
  }
  return ps;
}

cplx pulse_correlation(std::span<const cplx> a, std::span<const cplx> b, long lag) {
  cplx acc{};
  const long na = static_cast<long>(a.size());
  const long nb = static_cast<long>(b.size());
  const long lo = std::max(0L, lag);
  const long hi = std::min(na, nb + lag);
  for (long i = lo; i < hi; ++i) acc += a[i] * std::conj(b[i - lag]);
  return acc;
}

NyquistReport verify_nyquist(const PulseSet& ps, int max_lag) {
  if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
  if (ps.pulses.empty() || ps.stride < 1) throw std::invalid_argument("invalid pulse set");
  const std::size_t L = ps.pulse_length();
  for (const auto& p : ps.pulses)
    if (p.size() != L) throw std::invalid_argument("pulses must share one length");

  // Lags beyond the pulse support correlate to exactly zero.
  const long support_lags = (static_cast<long>(L) - 1) / ps.stride;
  const long K = std::min<long>(max_lag, support_lags);
  const std::size_t N = ps.pulses.size();

  NyquistReport rep;
  rep.max_lag = static_cast<int>(K);
  rep.ordinary_residuals.assign(N, 0.0);
  rep.cross_residuals = N > 1 ? Grid<double>(N, N, 0.0) : Grid<double>();
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t l = 0; l < N; ++l) {
      double worst = 0.0;
      for (long k = -K; k <= K; ++k) {
        cplx r = pulse_correlation(ps.pulses[n], ps.pulses[l], k * ps.stride);
        if (n == l && k == 0) r -= 1.0;
        worst = std::max(worst, std::abs(r));
      }
      if (n == l)
        rep.ordinary_residuals[n] = worst;
      else
        rep.cross_residuals(n, l) = worst;
    }
  }
  return rep;
}

double phase_constraint_residual(const PrototypeFilter& q, bool quarter_turn) {
  if (q.taps.empty()) throw std::invalid_argument("empty prototype");
  const int sps = q.samples_per_symbol;  // prototype period 2T
  // Grid size: at least 16x zero padding and a multiple of 2*sps so that the
  // pi/2T shift (nfft / (2 sps) bins) lands on a bin.
  const std::size_t L = q.taps.size();
  const std::size_t unit = 2 * static_cast<std::size_t>(sps);
  const std::size_t nfft = ((16 * L + unit - 1) / unit) * unit;
  ComplexBuffer buf(nfft);
  for (std::size_t i = 0; i < L; ++i) buf[i] = q.taps[i];
  auto Q = dft(buf);
  const double center = static_cast<double>(L - 1) / 2.0;
  double peak = 0.0;
  for (std::size_t b = 0; b < nfft; ++b) {
    // Reference the phase to the center tap (zero-phase view of q).
    const double w = 2.0 * kPi * static_cast<double>(b) / static_cast<double>(nfft);
    Q[b] *= std::polar(1.0, w * center);
    peak = std::max(peak, std::norm(Q[b]));
  }
  const long n = static_cast<long>(nfft);
  const long shift = n / static_cast<long>(unit);  // pi/2T in bins
  const long half_span = 2 * shift;                 // pi/T in bins
  auto at = [&](long b) { return Q[static_cast<std::size_t>(((b % n) + n) % n)]; };
  const cplx rot = quarter_turn ? cplx{0.0, 1.0} : cplx{1.0, 0.0};
  double worst = 0.0;
  for (long b = -half_span; b <= half_span; ++b) {
    const cplx prod = at(b - shift) * std::conj(rot * at(b + shift));
    worst = std::max(worst, std::abs(prod.real()));
  }
  return worst / peak;
}

void write_prototype_csv(const PrototypeFilter& q, const std::string& path,
                         std::span<const std::string> header_lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& h : header_lines) out << "# " << h << '\n';
  out.precision(17);
  for (double t : q.taps) out << t << '\n';
}

PrototypeFilter read_prototype_csv(const std::string& path, int samples_per_symbol, std::string name) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  PrototypeFilter q;
  q.samples_per_symbol = samples_per_symbol;
  q.name = std::move(name);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double v;
    if (!(ss >> v) || !std::isfinite(v)) throw std::invalid_argument("malformed tap line: " + line);
    q.taps.push_back(v);
  }
  if (q.taps.empty()) throw std::invalid_argument("no taps in " + path);
  return q;
}

}  // namespace mcw
