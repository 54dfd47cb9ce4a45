#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mcwave/channel.hpp"
#include "mcwave/cli.hpp"
#include "mcwave/cmt_smt.hpp"
#include "mcwave/metrics.hpp"
#include "mcwave/ofdm.hpp"
#include "mcwave/oqam_filterbank.hpp"
#include "mcwave/pulses.hpp"

namespace py = pybind11;
using namespace mcw;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexBuffer to_buffer(const CArray& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

CArray to_array(const ComplexBuffer& x) {
  CArray a(static_cast<py::ssize_t>(x.size()));
  std::copy(x.begin(), x.end(), a.mutable_data());
  return a;
}

RArray to_array(const RealBuffer& x) {
  RArray a(static_cast<py::ssize_t>(x.size()));
  std::copy(x.begin(), x.end(), a.mutable_data());
  return a;
}

template <typename T, typename A>
Grid<T> to_grid(const A& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array (symbols x subcarriers)");
  Grid<T> g(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), g.values().begin());
  return g;
}

template <typename T>
py::array_t<T> grid_to_array(const Grid<T>& g) {
  py::array_t<T> a({static_cast<py::ssize_t>(g.rows()), static_cast<py::ssize_t>(g.cols())});
  std::copy(g.values().begin(), g.values().end(), a.mutable_data());
  return a;
}

PhydyasP3 p3_of(const std::string& s) {
  if (s == "symmetric") return PhydyasP3::symmetric;
  if (s == "printed") return PhydyasP3::printed;
  throw std::invalid_argument("p3 must be 'symmetric' or 'printed'");
}

OqamScheme scheme_of(const std::string& s) {
  if (s == "phydyas") return OqamScheme::phydyas;
  if (s == "smt") return OqamScheme::smt;
  throw std::invalid_argument("scheme must be 'phydyas' or 'smt'");
}

CmtConfig cmt_config(int N, int stride, double rolloff, int span, bool alternation) {
  CmtConfig cfg{N, stride, rrc_prototype(rolloff, span, 2 * stride), alternation};
  cfg.validate();
  return cfg;
}

py::dict nyquist_dict(const NyquistReport& r) {
  py::dict d;
  d["ordinary_residuals"] = r.ordinary_residuals;
  d["cross_residuals"] = grid_to_array(r.cross_residuals);
  d["max_lag"] = r.max_lag;
  d["max_ordinary"] = r.max_ordinary();
  d["max_cross"] = r.max_cross();
  d["max_adjacent_cross"] = r.max_adjacent_cross();
  return d;
}

}  // namespace

PYBIND11_MODULE(_mcwave, m) {
  m.doc() = "Multicarrier waveform library: OFDM, CMT, SMT and OQAM filter banks";
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("dft", [](const CArray& x) { return to_array(dft(to_buffer(x))); }, "Unnormalized forward DFT.");
  m.def("idft", [](const CArray& x) { return to_array(idft(to_buffer(x))); }, "Inverse DFT with 1/N.");

  m.def("rect_prototype", [](int sps) { return to_array(rect_prototype(sps).taps); }, py::arg("samples_per_symbol"));
  m.def("rrc_prototype",
        [](double rolloff, int span, int sps) { return to_array(rrc_prototype(rolloff, span, sps).taps); },
        py::arg("rolloff"), py::arg("span_symbols"), py::arg("samples_per_symbol"));
  m.def("phydyas_prototype",
        [](int M, int K, const std::string& p3) { return to_array(phydyas_prototype(M, K, p3_of(p3)).taps); },
        py::arg("M"), py::arg("K") = 4, py::arg("p3") = "symmetric");
  m.def("stopband_attenuation",
        [](int M, double edge, const std::string& p3) {
          return stopband_attenuation(phydyas_prototype(M, 4, p3_of(p3)), M, edge);
        },
        py::arg("M"), py::arg("edge_spacings") = kDefaultStopbandEdge, py::arg("p3") = "symmetric",
        "Attenuation in dB of the PHYDYAS prototype beyond the edge (in subcarrier spacings).");

  m.def(
      "verify_nyquist",
      [](const std::string& set, int N, int sps, double rolloff, int span, bool alternation, int max_lag) {
        PulseSet ps;
        if (set == "ofdm")
          ps = build_ofdm_pulseset(N, sps);
        else if (set == "modified-ofdm")
          ps = build_modified_ofdm_pulseset(rrc_prototype(rolloff, span, sps), N);
        else if (set == "cmt")
          ps = build_cmt_pulseset(rrc_prototype(rolloff, span, sps), N, CmtForm::cosine, alternation);
        else
          throw std::invalid_argument("set must be 'ofdm', 'modified-ofdm' or 'cmt'");
        return nyquist_dict(verify_nyquist(ps, max_lag));
      },
      py::arg("set"), py::arg("N"), py::arg("samples_per_symbol"), py::arg("rolloff") = 1.0, py::arg("span") = 8,
      py::arg("phase_alternation") = true, py::arg("max_lag") = 8);

  m.def(
      "ofdm_modulate",
      [](const CArray& grid, int cp) {
        const auto g = to_grid<cplx>(grid);
        return to_array(ofdm_modulate(g, {static_cast<int>(g.cols()), cp}));
      },
      py::arg("grid"), py::arg("cp_len") = 0);
  m.def(
      "ofdm_demodulate",
      [](const CArray& rx, int N, int cp, std::optional<CArray> channel) {
        const OfdmConfig cfg{N, cp};
        const auto eq = channel ? one_tap_gains(to_buffer(*channel), N) : unit_gains(N);
        return grid_to_array(ofdm_demodulate(to_buffer(rx), cfg, eq));
      },
      py::arg("rx"), py::arg("N"), py::arg("cp_len") = 0, py::arg("channel") = py::none(),
      "Demodulate; with channel taps given, apply the matching one-tap equalizer.");

  m.def(
      "apply_channel",
      [](const CArray& tx, const CArray& taps, double noise_variance, std::uint64_t seed) {
        return to_array(apply_channel(to_buffer(tx), {to_buffer(taps), noise_variance, seed}));
      },
      py::arg("tx"), py::arg("taps"), py::arg("noise_variance") = 0.0, py::arg("seed") = 0);

  m.def(
      "cmt_modulate",
      [](const RArray& grid, int stride, double rolloff, int span, bool alternation) {
        const auto g = to_grid<double>(grid);
        return to_array(cmt_modulate(g, cmt_config(static_cast<int>(g.cols()), stride, rolloff, span, alternation)));
      },
      py::arg("grid"), py::arg("stride"), py::arg("rolloff") = 1.0, py::arg("span") = 8,
      py::arg("phase_alternation") = true);
  m.def(
      "cmt_demodulate",
      [](const CArray& rx, int N, std::size_t rows, int stride, double rolloff, int span, bool alternation) {
        return grid_to_array(cmt_demodulate(to_buffer(rx), cmt_config(N, stride, rolloff, span, alternation), rows));
      },
      py::arg("rx"), py::arg("N"), py::arg("num_symbols"), py::arg("stride"), py::arg("rolloff") = 1.0,
      py::arg("span") = 8, py::arg("phase_alternation") = true);
  m.def(
      "smt_modulate",
      [](const CArray& grid, int stride, double rolloff, int span) {
        const auto g = to_grid<cplx>(grid);
        return to_array(smt_modulate(g, cmt_config(static_cast<int>(g.cols()), stride, rolloff, span, true)));
      },
      py::arg("grid"), py::arg("stride"), py::arg("rolloff") = 1.0, py::arg("span") = 8);
  m.def(
      "smt_demodulate",
      [](const CArray& rx, int N, std::size_t rows, int stride, double rolloff, int span) {
        return grid_to_array(smt_demodulate(to_buffer(rx), cmt_config(N, stride, rolloff, span, true), rows));
      },
      py::arg("rx"), py::arg("N"), py::arg("num_symbols"), py::arg("stride"), py::arg("rolloff") = 1.0,
      py::arg("span") = 8);
  m.def(
      "cmt_qam_modulate",
      [](const CArray& grid, int stride, double rolloff, int span) {
        const auto g = to_grid<cplx>(grid);
        return to_array(cmt_qam_modulate(g, cmt_config(static_cast<int>(g.cols()), stride, rolloff, span, true)));
      },
      py::arg("grid"), py::arg("stride"), py::arg("rolloff") = 1.0, py::arg("span") = 8,
      "QAM split, CMT modulation, then removal of the global frequency shift.");

  m.def(
      "oqam_modulate",
      [](const CArray& grid, int K, const std::string& scheme, const std::string& p3, bool direct) {
        const auto g = to_grid<cplx>(grid);
        const auto cfg = FilterBankConfig::phydyas(static_cast<int>(g.cols()), K, p3_of(p3), scheme_of(scheme));
        const auto og = oqam_preprocess(g, cfg.scheme);
        return to_array(direct ? direct_synthesize(og, cfg) : sfb_synthesize(og, cfg));
      },
      py::arg("grid"), py::arg("K") = 4, py::arg("scheme") = "phydyas", py::arg("p3") = "symmetric",
      py::arg("direct") = false, "OQAM preprocessing then polyphase (or direct-form) synthesis.");
  m.def(
      "oqam_demodulate",
      [](const CArray& rx, int M, std::size_t rows, int K, const std::string& scheme, const std::string& p3) {
        const auto cfg = FilterBankConfig::phydyas(M, K, p3_of(p3), scheme_of(scheme));
        return grid_to_array(oqam_postprocess(afb_analyze(to_buffer(rx), cfg, 2 * rows), cfg.scheme));
      },
      py::arg("rx"), py::arg("M"), py::arg("num_symbols"), py::arg("K") = 4, py::arg("scheme") = "phydyas",
      py::arg("p3") = "symmetric");

  m.def(
      "estimate_psd",
      [](const CArray& x, std::size_t segment, double overlap) {
        const auto p = estimate_psd(to_buffer(x), segment, overlap);
        return py::make_tuple(to_array(p.freq), to_array(p.power_db));
      },
      py::arg("x"), py::arg("segment_len"), py::arg("overlap") = 0.5, "Returns (freq, power_db).");
  m.def(
      "evm_db",
      [](const CArray& tx, const CArray& rx) { return evm_db(to_grid<cplx>(tx), to_grid<cplx>(rx)); },
      py::arg("tx"), py::arg("rx"));

  m.def(
      "simulate",
      [](const std::string& config_json, std::optional<double> snr_db) {
        const auto cfg = cli::scenario_from_json(nlohmann::json::parse(config_json));
        const auto r = cli::simulate(cfg, snr_db);
        py::dict d;
        d["evm_db"] = r.metrics.evm_db;
        d["ber"] = r.metrics.ber;
        d["latency_samples"] = r.latency_samples;
        d["tx_waveform"] = to_array(r.tx_waveform);
        d["tx_symbols"] = grid_to_array(r.tx_symbols);
        d["rx_symbols"] = grid_to_array(r.rx_symbols);
        d["config_hash"] = cli::config_hash(cfg);
        return d;
      },
      py::arg("config_json"), py::arg("snr_db") = py::none(),
      "Run a scenario given as a JSON string; same keys as the CLI config file.");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "mcwave");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end; returns (exit_code, stdout, stderr).");
}
