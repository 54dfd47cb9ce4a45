#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "mcwave/pulses.hpp"
#include "support.hpp"

using namespace mcw;

namespace {

double energy(const RealBuffer& t) {
  double e = 0.0;
  for (double v : t) e += v * v;
  return e;
}

// Brute-force residual over all lags of one stride, no helper from the library.
double brute_cross(const ComplexBuffer& a, const ComplexBuffer& b, int stride, int max_lag, bool same) {
  const long L = static_cast<long>(a.size());
  double worst = 0.0;
  for (long k = -max_lag; k <= max_lag; ++k) {
    cplx acc = 0.0;
    for (long i = 0; i < L; ++i) {
      const long j = i - k * stride;
      if (j >= 0 && j < L) acc += a[i] * std::conj(b[j]);
    }
    if (same && k == 0) acc -= 1.0;
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace

TEST_SUITE("pulses") {
  TEST_CASE("rect prototype examples") {
    CHECK(rect_prototype(1).taps == RealBuffer{1.0});
    const auto r4 = rect_prototype(4);
    REQUIRE(r4.taps.size() == 4);
    for (double v : r4.taps) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
    for (int L : {1, 2, 3, 7, 64, 100}) CHECK(std::abs(energy(rect_prototype(L).taps) - 1.0) < 1e-12);
    CHECK_THROWS_AS(rect_prototype(0), std::invalid_argument);
  }

  TEST_CASE("rrc self-convolution is Nyquist to truncation accuracy") {
    const auto q = rrc_prototype(1.0, 8, 8);
    const ComplexBuffer c = to_complex(q.taps);
    const double res = brute_cross(c, c, 8, 8, true);
    CHECK(res < 2e-3);
  }

  TEST_CASE("rrc symmetry and unit energy for many parameters") {
    for (double beta : {0.1, 0.25, 0.5, 1.0})
      for (int span : {2, 6, 8, 13})
        for (int sps : {2, 4, 7, 16}) {
          CAPTURE(beta);
          CAPTURE(span);
          CAPTURE(sps);
          const auto q = rrc_prototype(beta, span, sps);
          CHECK(q.is_symmetric(1e-12));
          CHECK(std::abs(energy(q.taps) - 1.0) < 1e-12);
          CHECK(all_finite(to_complex(q.taps)));
        }
    CHECK_THROWS_AS(rrc_prototype(0.0, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(rrc_prototype(1.5, 8, 8), std::invalid_argument);
  }

  TEST_CASE("phydyas constants and center tap") {
    const auto P = phydyas_coefficients();
    CHECK(P[1] == 0.97195983);
    CHECK(P[2] == 1.0 / std::sqrt(2.0));
    CHECK(P[3] == doctest::Approx(0.23514695).epsilon(1e-8));
    CHECK(phydyas_coefficients(PhydyasP3::printed)[3] == doctest::Approx(std::sqrt(1.0 - 1.0 / std::sqrt(2.0))));
    const auto raw = phydyas_prototype(4, 4, PhydyasP3::symmetric, false);
    REQUIRE(raw.taps.size() == 15);
    CHECK(raw.taps[7] == doctest::Approx(1.0 + 2.0 * (P[1] + P[2] + P[3])).epsilon(1e-12));
    CHECK(raw.taps[7] == doctest::Approx(4.8284).epsilon(1e-4));
  }

  TEST_CASE("property: phydyas length and symmetry") {
    for (int M : {2, 4, 8, 16, 64, 256}) {
      CAPTURE(M);
      const auto p = phydyas_prototype(M);
      CHECK(p.taps.size() == static_cast<std::size_t>(4 * M - 1));
      const auto L = p.taps.size();
      double worst = 0.0;
      for (std::size_t m = 0; m < L; ++m) worst = std::max(worst, std::abs(p.taps[m] - p.taps[L - 1 - m]));
      CHECK(worst < 1e-12);
      CHECK(std::abs(energy(p.taps) - 1.0) < 1e-12);
    }
    CHECK_THROWS_WITH_AS(phydyas_prototype(64, 3), "no coefficient table", std::invalid_argument);
  }

  TEST_CASE("ofdm pulse set examples") {
    const auto ps = build_ofdm_pulseset(4, 16);
    for (const auto& v : ps.pulses[0]) {
      CHECK(std::abs(v.imag()) < 1e-15);
      CHECK(v.real() == doctest::Approx(0.25));
    }
    CHECK(verify_nyquist(ps, 4).max_cross() < 1e-12);

    const auto deg = build_ofdm_pulseset(2, 2);
    const double c = 1.0 / std::sqrt(2.0);
    CHECK(test::max_abs_diff(deg.pulses[0], ComplexBuffer{c, c}) < 1e-15);
    CHECK(test::max_abs_diff(deg.pulses[1], ComplexBuffer{c, -c}) < 1e-15);
    CHECK(std::abs(pulse_correlation(deg.pulses[0], deg.pulses[1], 0)) < 1e-15);
  }

  TEST_CASE("verify_nyquist agrees with a brute-force oracle") {
    const auto q = rrc_prototype(0.5, 6, 16);
    const auto ps = build_modified_ofdm_pulseset(q, 4);
    const auto rep = verify_nyquist(ps, 10);
    for (int n = 0; n < 4; ++n)
      for (int l = 0; l < 4; ++l) {
        const double want = brute_cross(ps.pulses[n], ps.pulses[l], ps.stride, 10, n == l);
        const double got = n == l ? rep.ordinary_residuals[n] : rep.cross_residuals(n, l);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
  }

  TEST_CASE("ofdm rect set meets both criteria") {
    const auto rep = verify_nyquist(build_ofdm_pulseset(8, 64), 8);
    CHECK(rep.max_ordinary() < 1e-10);
    CHECK(rep.max_cross() < 1e-10);
  }

  TEST_CASE("modified ofdm with rect reduces to ofdm") {
    for (int N : {2, 4, 8}) {
      const auto a = build_modified_ofdm_pulseset(rect_prototype(16), N);
      const auto b = build_ofdm_pulseset(N, 16);
      for (int n = 0; n < N; ++n) CHECK(test::max_abs_diff(a.pulses[n], b.pulses[n]) < 1e-15);
    }
  }

  TEST_CASE("modified ofdm with rrc violates the generalized criterion") {
    const int N = 8;
    const auto ps = build_modified_ofdm_pulseset(rrc_prototype(1.0, 8, 2 * N), N);
    const auto rep = verify_nyquist(ps, 8);
    CHECK(rep.max_adjacent_cross() > 0.1);
    CHECK(rep.max_cross_beyond(2) < 1e-3);
  }

  TEST_CASE("cmt pulse set with and without alternation") {
    const auto q = rrc_prototype(1.0, 16, 32);
    const auto on = verify_nyquist(build_cmt_pulseset(q, 8, CmtForm::cosine, true), 16);
    const auto off = verify_nyquist(build_cmt_pulseset(q, 8, CmtForm::cosine, false), 16);
    CHECK(on.max_adjacent_cross() < 5e-3);
    CHECK(on.max_residual() < 5e-3);
    CHECK(off.max_adjacent_cross() > 0.1);
  }

  TEST_CASE("cmt cosine pulses are real and follow the closed form") {
    const auto q = rrc_prototype(1.0, 8, 16);
    const auto ps = build_cmt_pulseset(q, 6, CmtForm::cosine, true);
    const double c = static_cast<double>(q.taps.size() - 1) / 2.0;
    for (std::size_t n = 0; n < ps.pulses.size(); ++n)
      for (std::size_t k = 0; k < q.taps.size(); ++k) {
        CHECK(std::abs(ps.pulses[n][k].imag()) < 1e-15);
        const double t = (static_cast<double>(k) - c) / 8.0;
        const double psi = n % 2 ? kPi / 2 : 0.0;
        const double want = std::sqrt(2.0) * q.taps[k] * std::cos((n + 0.5) * kPi * t + kPi / 4 + psi);
        CHECK(ps.pulses[n][k].real() == doctest::Approx(want).epsilon(1e-12));
      }
  }

  TEST_CASE("single pulse report has an empty cross matrix") {
    PulseSet ps{{to_complex(rect_prototype(8).taps)}, 8};
    const auto rep = verify_nyquist(ps, 4);
    CHECK(rep.cross_residuals.empty());
    CHECK(rep.ordinary_residuals.size() == 1);
    CHECK(rep.max_ordinary() < 1e-15);
  }

  TEST_CASE("property: refining oversampling does not worsen ofdm residuals") {
    for (int N : {2, 4, 8}) {
      double prev = verify_nyquist(build_ofdm_pulseset(N, N), 4).max_residual();
      for (int sps = 2 * N; sps <= 16 * N; sps *= 2) {
        const double cur = verify_nyquist(build_ofdm_pulseset(N, sps), 4).max_residual();
        CHECK(cur <= prev + 1e-10);
        prev = cur;
      }
    }
  }

  TEST_CASE("phase constraint residual") {
    const auto q = rrc_prototype(1.0, 8, 16);
    CHECK(phase_constraint_residual(q) > 0.1);
    CHECK(phase_constraint_residual(q, true) < 1e-10);
    const double rect = phase_constraint_residual(rect_prototype(16));
    CHECK(std::isfinite(rect));
    MESSAGE("rect prototype phase residual: " << rect);
  }

  TEST_CASE("prototype csv round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "mcwave_taps_test.csv").string();
    const auto p = phydyas_prototype(16);
    write_prototype_csv(p, path, std::vector<std::string>{"header"});
    const auto back = read_prototype_csv(path, 16);
    CHECK(test::max_abs_diff(back.taps, p.taps) < 1e-15);
    std::filesystem::remove(path);
  }

  TEST_CASE("verifier rejects malformed sets") {
    CHECK_THROWS_AS(verify_nyquist(build_ofdm_pulseset(4, 8), 0), std::invalid_argument);
    PulseSet bad{{ComplexBuffer(4), ComplexBuffer(5)}, 2};
    CHECK_THROWS_AS(verify_nyquist(bad, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_cmt_pulseset(rect_prototype(7), 4, CmtForm::cosine, true), std::invalid_argument);
  }
}
