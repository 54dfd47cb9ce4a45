#include "mcwave/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mcwave/cmt_smt.hpp"
#include "mcwave/io.hpp"
#include "mcwave/ofdm.hpp"
#include "mcwave/oqam_filterbank.hpp"
#include "mcwave/pulses.hpp"
#include "mcwave/qam.hpp"

namespace mcw::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.1.0";

PhydyasP3 parse_p3(const std::string& s) {
  if (s == "symmetric") return PhydyasP3::symmetric;
  if (s == "printed") return PhydyasP3::printed;
  throw std::invalid_argument("p3 must be 'symmetric' or 'printed', got '" + s + "'");
}

OqamScheme parse_scheme(const std::string& s) {
  if (s == "phydyas") return OqamScheme::phydyas;
  if (s == "smt") return OqamScheme::smt;
  throw std::invalid_argument("oqam_scheme must be 'phydyas' or 'smt', got '" + s + "'");
}

OfdmConfig ofdm_config(const ScenarioConfig& c) { return {c.num_subcarriers, c.cp_len}; }

CmtConfig cmt_config(const ScenarioConfig& c) {
  const int stride = c.stride > 0 ? c.stride : c.num_subcarriers;
  const std::string type = c.prototype.type.empty() ? "rrc" : c.prototype.type;
  PrototypeFilter q;
  if (type == "rrc")
    q = rrc_prototype(c.prototype.rolloff, c.prototype.span, 2 * stride);
  else if (type == "phydyas")
    q = phydyas_prototype(2 * stride, 4, parse_p3(c.prototype.p3));
  else if (type == "rect")
    q = rect_prototype(2 * stride);
  else
    throw std::invalid_argument("unknown prototype type '" + type + "'");
  CmtConfig cfg{c.num_subcarriers, stride, std::move(q), true};
  cfg.validate();
  return cfg;
}

FilterBankConfig fb_config(const ScenarioConfig& c) {
  const std::string type = c.prototype.type.empty() ? "phydyas" : c.prototype.type;
  if (type != "phydyas") throw std::invalid_argument("the OQAM filter bank needs a PHYDYAS prototype (length K*M - 1)");
  auto cfg = FilterBankConfig::phydyas(c.num_subcarriers, c.overlap, parse_p3(c.prototype.p3),
                                       parse_scheme(c.oqam_scheme));
  cfg.validate();
  return cfg;
}

ComplexBuffer channel_taps(const ScenarioConfig& c) {
  return c.channel_file.empty() ? c.channel_taps : read_channel_csv(c.channel_file);
}

std::vector<std::string> header_lines(const ScenarioConfig& c) {
  return {std::string("mcwave ") + kToolVersion, "config_hash=" + config_hash(c),
          "master_seed=" + std::to_string(c.master_seed)};
}

ordered_json provenance(const ScenarioConfig& c) {
  return {{"tool", "mcwave"},
          {"version", kToolVersion},
          {"config_hash", config_hash(c)},
          {"master_seed", c.master_seed},
          {"rng", std::string(Rng::algorithm)}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct Modulated {
  ComplexBuffer waveform;
  int latency = 0;
};

Modulated modulate(const ScenarioConfig& c, const SymbolGrid& symbols) {
  if (c.waveform == "ofdm") return {ofdm_modulate(symbols, ofdm_config(c)), c.cp_len};
  if (c.waveform == "cmt") {
    const auto cfg = cmt_config(c);
    return {cmt_modulate(qam_split(symbols), cfg), cfg.latency()};
  }
  if (c.waveform == "smt") {
    const auto cfg = cmt_config(c);
    return {smt_modulate(symbols, cfg), cfg.latency()};
  }
  const auto cfg = fb_config(c);
  return {sfb_synthesize(oqam_preprocess(symbols, cfg.scheme), cfg), cfg.latency()};
}

SymbolGrid demodulate(const ScenarioConfig& c, std::span<const cplx> rx, std::size_t rows,
                      std::span<const cplx> taps) {
  if (c.waveform == "ofdm") {
    const auto cfg = ofdm_config(c);
    const auto gains = one_tap_gains(taps, cfg.num_subcarriers);
    return ofdm_demodulate(rx, cfg, gains);
  }
  if (c.waveform == "cmt") return qam_merge(cmt_demodulate(rx, cmt_config(c), 2 * rows));
  if (c.waveform == "smt") return smt_demodulate(rx, cmt_config(c), rows);
  const auto cfg = fb_config(c);
  return oqam_postprocess(afb_analyze(rx, cfg, 2 * rows), cfg.scheme);
}

LeakageMatrix leakage(const ScenarioConfig& c) {
  if (c.waveform == "ofdm") return interference_matrix(ofdm_config(c), c.leakage_extent);
  if (c.waveform == "cmt") return interference_matrix(cmt_config(c), false, c.leakage_extent);
  if (c.waveform == "smt") return interference_matrix(cmt_config(c), true, c.leakage_extent);
  return interference_matrix(fb_config(c), c.leakage_extent);
}

SymbolGrid random_symbols(const ScenarioConfig& c, BitVector* bits_out) {
  Rng rng(derive_seed(c.master_seed, 0));
  const QamMapper mapper(c.qam_order);
  const auto rows = static_cast<std::size_t>(c.num_symbols);
  const auto cols = static_cast<std::size_t>(c.num_subcarriers);
  auto bits = random_bits(rows * cols * static_cast<std::size_t>(mapper.bits_per_symbol()), rng);
  auto grid = mapper.map_grid(bits, rows, cols);
  if (bits_out) *bits_out = std::move(bits);
  return grid;
}

std::uint64_t noise_seed(const ScenarioConfig& c, double snr_db) {
  // Keyed by the SNR value so a point reproduces regardless of its position
  // in a sweep list.
  return derive_seed(c.master_seed, 1 + fnv1a64(std::to_string(snr_db)));
}

ordered_json report_json(const ScenarioConfig& c, const SimulationResult& r) {
  ordered_json j;
  j["provenance"] = provenance(c);
  j["config"] = to_json(c);
  j["waveform"] = c.waveform;
  j["snr_db"] = r.snr_db ? json(*r.snr_db) : json(nullptr);
  j["latency_samples"] = r.latency_samples;
  j["num_tx_samples"] = r.tx_waveform.size();
  j["metrics"] = to_json(r.metrics);
  return j;
}

void write_constellation_csv(const SimulationResult& r, const fs::path& path, const ScenarioConfig& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& h : header_lines(c)) out << "# " << h << '\n';
  out << "tx_re,tx_im,rx_re,rx_im\n";
  out.precision(12);
  for (std::size_t i = 0; i < r.tx_symbols.size(); ++i) {
    const auto t = r.tx_symbols.values()[i];
    const auto v = r.rx_symbols.values()[i];
    out << t.real() << ',' << t.imag() << ',' << v.real() << ',' << v.imag() << '\n';
  }
}

// ---- subcommands ---------------------------------------------------------

struct DesignArgs {
  std::string type = "phydyas";
  int M = 64;
  int K = 4;
  int sps = 0;
  double rolloff = 1.0;
  int span = 8;
  std::string p3 = "symmetric";
  std::string out_dir = ".";
};

int cmd_design_filter(const DesignArgs& a, std::ostream& out) {
  PrototypeFilter p;
  int M = a.M;
  if (a.type == "phydyas") {
    p = phydyas_prototype(a.M, a.K, parse_p3(a.p3));
  } else if (a.type == "rect") {
    const int sps = a.sps > 0 ? a.sps : a.M;
    p = rect_prototype(sps);
    M = sps;
  } else if (a.type == "rrc") {
    const int sps = a.sps > 0 ? a.sps : a.M;
    p = rrc_prototype(a.rolloff, a.span, sps);
    M = sps;
  } else {
    throw std::invalid_argument("unknown filter type '" + a.type + "'");
  }
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  const std::vector<std::string> hdr = {std::string("mcwave ") + kToolVersion, "type=" + a.type,
                                        "length=" + std::to_string(p.taps.size())};
  write_prototype_csv(p, (dir / "taps.csv").string(), hdr);

  const auto fr = frequency_response(p, M);
  {
    std::ofstream f(dir / "freq_response.csv");
    for (const auto& h : hdr) f << "# " << h << '\n';
    f << "freq_subcarrier_spacings,magnitude_db\n";
    f.precision(12);
    for (std::size_t i = 0; i < fr.freq.size(); ++i) f << fr.freq[i] << ',' << fr.magnitude_db[i] << '\n';
  }
  const double sb = stopband_attenuation(p, M, kDefaultStopbandEdge);
  const double sb_adjacent = stopband_attenuation(p, M, 2.0);
  ordered_json rep = {{"type", a.type},
                      {"name", p.name},
                      {"length", p.taps.size()},
                      {"samples_per_symbol", p.samples_per_symbol},
                      {"symmetric", p.is_symmetric()},
                      {"energy", p.energy()},
                      {"stopband_edge_spacings", kDefaultStopbandEdge},
                      {"stopband_attenuation_db", sb},
                      {"attenuation_beyond_2_spacings_db", sb_adjacent}};
  write_text(dir / "report.json", rep.dump(2) + "\n");
  out << "wrote " << p.taps.size() << " taps to " << (dir / "taps.csv").string() << "; stopband (>"
      << kDefaultStopbandEdge << " spacings) " << sb << " dB, beyond 2 spacings " << sb_adjacent << " dB\n";
  return kSuccess;
}

struct NyquistArgs {
  std::string set = "ofdm";
  int N = 8;
  int sps = 64;
  int stride = 8;
  std::string prototype = "rrc";
  double rolloff = 1.0;
  int span = 8;
  std::string form = "cosine";
  bool no_alternation = false;
  int max_lag = 8;
  double tol = 1e-8;
  std::string out = "nyquist_report.json";
};

int cmd_verify_nyquist(const NyquistArgs& a, std::ostream& out) {
  PulseSet ps;
  if (a.set == "ofdm") {
    ps = build_ofdm_pulseset(a.N, a.sps);
  } else if (a.set == "modified-ofdm") {
    PrototypeFilter q;
    if (a.prototype == "rrc")
      q = rrc_prototype(a.rolloff, a.span, a.sps);
    else if (a.prototype == "rect")
      q = rect_prototype(a.sps);
    else
      throw std::invalid_argument("unknown prototype '" + a.prototype + "'");
    ps = build_modified_ofdm_pulseset(q, a.N);
  } else if (a.set == "cmt") {
    CmtForm form;
    if (a.form == "cosine")
      form = CmtForm::cosine;
    else if (a.form == "ssb")
      form = CmtForm::single_sideband;
    else
      throw std::invalid_argument("form must be 'cosine' or 'ssb'");
    ps = build_cmt_pulseset(rrc_prototype(a.rolloff, a.span, 2 * a.stride), a.N, form, !a.no_alternation);
  } else {
    throw std::invalid_argument("unknown pulse set '" + a.set + "'");
  }
  const auto rep = verify_nyquist(ps, a.max_lag);
  const bool pass = rep.max_residual() < a.tol;
  ordered_json cross = ordered_json::array();
  for (std::size_t r = 0; r < rep.cross_residuals.rows(); ++r) {
    const auto row = rep.cross_residuals.row(r);
    cross.push_back(std::vector<double>(row.begin(), row.end()));
  }
  ordered_json j = {{"set", a.set},
                    {"num_subcarriers", ps.num_subcarriers()},
                    {"stride", ps.stride},
                    {"tested_lags", {-rep.max_lag, rep.max_lag}},
                    {"ordinary_residuals", rep.ordinary_residuals},
                    {"cross_residuals", cross},
                    {"max_ordinary", rep.max_ordinary()},
                    {"max_cross", rep.max_cross()},
                    {"max_adjacent_cross", rep.max_adjacent_cross()},
                    {"tolerance", a.tol},
                    {"pass", pass}};
  if (const auto parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
  write_text(a.out, j.dump(2) + "\n");
  out << (pass ? "PASS" : "FAIL") << ": max residual " << rep.max_residual() << " (tol " << a.tol << ")\n";
  return pass ? kSuccess : kAuditFail;
}

void apply_overrides(ScenarioConfig& c, const CLI::App& app, const ScenarioConfig& flags) {
  auto set = [&](const char* name, auto member) {
    if (app.count(name) > 0) c.*member = flags.*member;
  };
  set("--waveform", &ScenarioConfig::waveform);
  set("--M", &ScenarioConfig::num_subcarriers);
  set("--K", &ScenarioConfig::overlap);
  set("--cp", &ScenarioConfig::cp_len);
  set("--stride", &ScenarioConfig::stride);
  set("--qam", &ScenarioConfig::qam_order);
  set("--symbols", &ScenarioConfig::num_symbols);
  set("--seed", &ScenarioConfig::master_seed);
  set("--snr", &ScenarioConfig::snr_db);
  set("--channel", &ScenarioConfig::channel_file);
  set("--out-dir", &ScenarioConfig::output_dir);
  set("--scheme", &ScenarioConfig::oqam_scheme);
  if (app.count("--prototype") > 0) c.prototype.type = flags.prototype.type;
  if (app.count("--p3") > 0) c.prototype.p3 = flags.prototype.p3;
}

void add_scenario_flags(CLI::App* sub, std::string& config_path, ScenarioConfig& f) {
  sub->add_option("--config", config_path, "Scenario file (JSON)");
  sub->add_option("--waveform", f.waveform, "ofdm | cmt | smt | oqam");
  sub->add_option("--M", f.num_subcarriers, "Number of subcarriers");
  sub->add_option("--K", f.overlap, "Overlap factor (oqam)");
  sub->add_option("--cp", f.cp_len, "Cyclic prefix length (ofdm)");
  sub->add_option("--stride", f.stride, "Real-symbol interval in samples (cmt/smt)");
  sub->add_option("--qam", f.qam_order, "QAM order: 4, 16 or 64");
  sub->add_option("--symbols", f.num_symbols, "Number of QAM symbol rows");
  sub->add_option("--seed", f.master_seed, "Master seed");
  sub->add_option("--snr", f.snr_db, "SNR values in dB")->delimiter(',');
  sub->add_option("--channel", f.channel_file, "Channel profile CSV (re,im per line)");
  sub->add_option("--out-dir", f.output_dir, "Output directory");
  sub->add_option("--scheme", f.oqam_scheme, "OQAM scheme: phydyas | smt");
  sub->add_option("--prototype", f.prototype.type, "Prototype: rrc | phydyas | rect");
  sub->add_option("--p3", f.prototype.p3, "PHYDYAS P3 variant: symmetric | printed");
}

ScenarioConfig resolve_scenario(const std::string& config_path, const CLI::App& app, const ScenarioConfig& flags) {
  ScenarioConfig c = config_path.empty() ? ScenarioConfig{} : load_scenario(config_path);
  apply_overrides(c, app, flags);
  c.validate();
  return c;
}

int cmd_simulate(const ScenarioConfig& c, bool save_waveform, std::ostream& out) {
  const std::optional<double> snr = c.snr_db.empty() ? std::nullopt : std::optional<double>(c.snr_db.front());
  const auto r = simulate(c, snr);
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  write_text(dir / "report.json", report_json(c, r).dump(2) + "\n");
  write_constellation_csv(r, dir / "constellation.csv", c);
  write_psd_csv(r.metrics.psd, (dir / "psd.csv").string(), header_lines(c));
  if (save_waveform) write_waveform_binary(r.tx_waveform, (dir / "waveform.bin").string());
  out << c.waveform << ": EVM " << r.metrics.evm_db << " dB, BER " << r.metrics.ber << " -> "
      << (dir / "report.json").string() << "\n";
  return kSuccess;
}

int cmd_ber_sweep(const ScenarioConfig& c, std::ostream& out) {
  if (c.snr_db.empty()) throw std::invalid_argument("ber-sweep needs at least one --snr value");
  std::vector<std::future<SimulationResult>> jobs;
  for (double snr : c.snr_db) jobs.push_back(std::async(std::launch::async, [&c, snr] { return simulate(c, snr); }));
  std::vector<SimulationResult> results;
  for (auto& j : jobs) results.push_back(j.get());

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  ordered_json points = ordered_json::array();
  std::ofstream csv(dir / "ber_sweep.csv");
  for (const auto& h : header_lines(c)) csv << "# " << h << '\n';
  csv << "snr_db,ber,evm_db\n";
  csv.precision(12);
  for (const auto& r : results) {
    points.push_back({{"snr_db", *r.snr_db}, {"ber", r.metrics.ber}, {"evm_db", r.metrics.evm_db}});
    csv << *r.snr_db << ',' << r.metrics.ber << ',' << r.metrics.evm_db << '\n';
    out << "snr " << *r.snr_db << " dB: BER " << r.metrics.ber << ", EVM " << r.metrics.evm_db << " dB\n";
  }
  ordered_json j = {{"provenance", provenance(c)}, {"config", to_json(c)}, {"points", points}};
  write_text(dir / "ber_sweep.json", j.dump(2) + "\n");
  return kSuccess;
}

int cmd_psd(const ScenarioConfig& c, const std::string& input, int segment, double overlap, const std::string& out_path,
            std::ostream& out) {
  const auto x = input.empty() ? synthesize_waveform(c) : read_waveform_binary(input);
  const auto psd = estimate_psd(x, static_cast<std::size_t>(segment), overlap);
  if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
  auto hdr = header_lines(c);
  if (!input.empty()) hdr = {std::string("mcwave ") + kToolVersion, "input=" + input};
  write_psd_csv(psd, out_path, hdr);
  out << "wrote " << psd.freq.size() << "-bin PSD to " << out_path << "\n";
  return kSuccess;
}

}  // namespace

// ---- scenario config -------------------------------------------------------

void ScenarioConfig::validate() const {
  if (waveform != "ofdm" && waveform != "cmt" && waveform != "smt" && waveform != "oqam")
    throw std::invalid_argument("waveform must be one of ofdm, cmt, smt, oqam");
  if (qam_order != 4 && qam_order != 16 && qam_order != 64)
    throw std::invalid_argument("qam_order must be 4, 16 or 64");
  if (num_subcarriers < 2) throw std::invalid_argument("num_subcarriers must be >= 2");
  if (num_symbols < 1) throw std::invalid_argument("num_symbols must be >= 1");
  if (!channel_file.empty() && !fs::exists(channel_file))
    throw std::invalid_argument("channel profile not found: " + channel_file);
  if (channel_taps.empty()) throw std::invalid_argument("channel needs at least one tap");
  if (psd_segment < 1) throw std::invalid_argument("psd segment must be positive");
  if (leakage_extent < 1) throw std::invalid_argument("leakage extent must be >= 1");
  for (double s : snr_db)
    if (!std::isfinite(s)) throw std::invalid_argument("snr values must be finite");
  if (waveform == "ofdm") ofdm_config(*this).validate();
  if (waveform == "cmt" || waveform == "smt") cmt_config(*this);
  if (waveform == "oqam") fb_config(*this);
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  static const std::vector<std::string> known = {
      "waveform", "num_subcarriers", "overlap", "cp_len",      "stride",     "oqam_scheme",
      "prototype", "channel",        "snr_db",  "qam_order",   "num_symbols", "master_seed",
      "output",    "psd",            "leakage_extent"};
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw std::invalid_argument("unknown scenario key '" + k + "'");
  try {
    c.waveform = j.value("waveform", c.waveform);
    c.num_subcarriers = j.value("num_subcarriers", c.num_subcarriers);
    c.overlap = j.value("overlap", c.overlap);
    c.cp_len = j.value("cp_len", c.cp_len);
    c.stride = j.value("stride", c.stride);
    c.oqam_scheme = j.value("oqam_scheme", c.oqam_scheme);
    if (j.contains("prototype")) {
      const auto& p = j.at("prototype");
      c.prototype.type = p.value("type", c.prototype.type);
      c.prototype.rolloff = p.value("rolloff", c.prototype.rolloff);
      c.prototype.span = p.value("span", c.prototype.span);
      c.prototype.p3 = p.value("p3", c.prototype.p3);
    }
    if (j.contains("channel")) {
      const auto& ch = j.at("channel");
      if (ch.contains("taps")) {
        c.channel_taps.clear();
        for (const auto& t : ch.at("taps")) c.channel_taps.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
      }
      c.channel_file = ch.value("file", c.channel_file);
    }
    if (j.contains("snr_db")) c.snr_db = j.at("snr_db").get<std::vector<double>>();
    c.qam_order = j.value("qam_order", c.qam_order);
    c.num_symbols = j.value("num_symbols", c.num_symbols);
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("output")) c.output_dir = j.at("output").value("dir", c.output_dir);
    if (j.contains("psd")) {
      c.psd_segment = j.at("psd").value("segment", c.psd_segment);
      c.psd_overlap = j.at("psd").value("overlap", c.psd_overlap);
    }
    c.leakage_extent = j.value("leakage_extent", c.leakage_extent);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("cannot parse scenario " + path + ": " + e.what());
  }
  auto c = scenario_from_json(j);
  // Relative channel paths resolve against the scenario file's directory.
  if (!c.channel_file.empty() && fs::path(c.channel_file).is_relative())
    c.channel_file = (fs::path(path).parent_path() / c.channel_file).string();
  return c;
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json taps = ordered_json::array();
  for (const auto& t : c.channel_taps) taps.push_back({t.real(), t.imag()});
  ordered_json ch = {{"taps", taps}};
  if (!c.channel_file.empty()) ch["file"] = c.channel_file;
  return {{"waveform", c.waveform},
          {"num_subcarriers", c.num_subcarriers},
          {"overlap", c.overlap},
          {"cp_len", c.cp_len},
          {"stride", c.stride},
          {"oqam_scheme", c.oqam_scheme},
          {"prototype",
           {{"type", c.prototype.type},
            {"rolloff", c.prototype.rolloff},
            {"span", c.prototype.span},
            {"p3", c.prototype.p3}}},
          {"channel", ch},
          {"snr_db", c.snr_db},
          {"qam_order", c.qam_order},
          {"num_symbols", c.num_symbols},
          {"master_seed", c.master_seed},
          {"output", {{"dir", c.output_dir}}},
          {"psd", {{"segment", c.psd_segment}, {"overlap", c.psd_overlap}}},
          {"leakage_extent", c.leakage_extent}};
}

std::string config_hash(const ScenarioConfig& c) { return hex64(fnv1a64(to_json(c).dump())); }

ComplexBuffer synthesize_waveform(const ScenarioConfig& c) {
  c.validate();
  return modulate(c, random_symbols(c, nullptr)).waveform;
}

SimulationResult simulate(const ScenarioConfig& c, std::optional<double> snr_db) {
  c.validate();
  SimulationResult r;
  r.snr_db = snr_db;
  BitVector tx_bits;
  r.tx_symbols = random_symbols(c, &tx_bits);
  auto mod = modulate(c, r.tx_symbols);
  r.tx_waveform = std::move(mod.waveform);
  r.latency_samples = mod.latency;

  const auto taps = channel_taps(c);
  ChannelModel ch{taps, 0.0, 0};
  if (snr_db) {
    ch.noise_variance = noise_variance_for_snr(r.tx_waveform, *snr_db);
    ch.seed = noise_seed(c, *snr_db);
  }
  const auto rx = apply_channel(r.tx_waveform, ch);
  r.rx_symbols = demodulate(c, rx, r.tx_symbols.rows(), taps);
  if (!all_finite(r.rx_symbols.values())) throw NumericError("non-finite values in demodulated symbols");

  const QamMapper mapper(c.qam_order);
  r.metrics.evm_db = evm_db(r.tx_symbols, r.rx_symbols);
  r.metrics.ber = ber(tx_bits, mapper.demap_grid(r.rx_symbols));
  const auto seg = std::min<std::size_t>(static_cast<std::size_t>(c.psd_segment), r.tx_waveform.size());
  r.metrics.psd = estimate_psd(r.tx_waveform, seg, c.psd_overlap);
  r.metrics.leakage = leakage(c);
  return r;
}

// ---- entry point -----------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mcwave: multicarrier waveform design, audit and simulation"};
  app.require_subcommand(1);

  DesignArgs design;
  auto* design_cmd = app.add_subcommand("design-filter", "Design a prototype filter and report its stopband");
  design_cmd->add_option("--type", design.type, "rect | rrc | phydyas");
  design_cmd->add_option("--M", design.M, "Number of subcarriers");
  design_cmd->add_option("--K", design.K, "Overlap factor");
  design_cmd->add_option("--sps", design.sps, "Samples per symbol (rect, rrc)");
  design_cmd->add_option("--rolloff", design.rolloff, "RRC roll-off");
  design_cmd->add_option("--span", design.span, "RRC span in symbols");
  design_cmd->add_option("--p3", design.p3, "PHYDYAS P3 variant: symmetric | printed");
  design_cmd->add_option("--out-dir", design.out_dir, "Output directory");

  NyquistArgs nyq;
  auto* nyq_cmd = app.add_subcommand("verify-nyquist", "Audit a pulse set against the Nyquist criteria");
  nyq_cmd->add_option("--set", nyq.set, "ofdm | modified-ofdm | cmt");
  nyq_cmd->add_option("--N", nyq.N, "Number of pulses");
  nyq_cmd->add_option("--sps", nyq.sps, "Samples per symbol (ofdm, modified-ofdm)");
  nyq_cmd->add_option("--stride", nyq.stride, "Symbol stride (cmt; prototype uses 2*stride)");
  nyq_cmd->add_option("--prototype", nyq.prototype, "rrc | rect (modified-ofdm)");
  nyq_cmd->add_option("--rolloff", nyq.rolloff, "RRC roll-off");
  nyq_cmd->add_option("--span", nyq.span, "RRC span in prototype symbols");
  nyq_cmd->add_option("--form", nyq.form, "cmt form: cosine | ssb");
  nyq_cmd->add_flag("--no-alternation", nyq.no_alternation, "Disable the quarter-turn alternation (cmt)");
  nyq_cmd->add_option("--max-lag", nyq.max_lag, "Largest symbol lag tested");
  nyq_cmd->add_option("--tol", nyq.tol, "Pass threshold on every residual");
  nyq_cmd->add_option("--out", nyq.out, "Report path (JSON)");

  std::string sim_config;
  ScenarioConfig sim_flags;
  bool save_waveform = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Run tx -> channel -> rx and report metrics");
  add_scenario_flags(sim_cmd, sim_config, sim_flags);
  sim_cmd->add_flag("--save-waveform", save_waveform, "Also write waveform.bin (interleaved float64 LE)");

  std::string sweep_config;
  ScenarioConfig sweep_flags;
  auto* sweep_cmd = app.add_subcommand("ber-sweep", "BER/EVM over a list of SNR values");
  add_scenario_flags(sweep_cmd, sweep_config, sweep_flags);

  std::string psd_config, psd_input, psd_out = "psd.csv";
  ScenarioConfig psd_flags;
  int psd_segment = 256;
  double psd_overlap = 0.5;
  auto* psd_cmd = app.add_subcommand("psd", "Welch PSD of a waveform file or a synthesized scenario");
  add_scenario_flags(psd_cmd, psd_config, psd_flags);
  psd_cmd->add_option("--input", psd_input, "Waveform file (interleaved float64 LE)");
  psd_cmd->add_option("--segment", psd_segment, "Segment length");
  psd_cmd->add_option("--overlap", psd_overlap, "Segment overlap fraction");
  psd_cmd->add_option("--out", psd_out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*design_cmd) return cmd_design_filter(design, out);
    if (*nyq_cmd) return cmd_verify_nyquist(nyq, out);
    if (*sim_cmd) return cmd_simulate(resolve_scenario(sim_config, *sim_cmd, sim_flags), save_waveform, out);
    if (*sweep_cmd) return cmd_ber_sweep(resolve_scenario(sweep_config, *sweep_cmd, sweep_flags), out);
    if (*psd_cmd)
      return cmd_psd(resolve_scenario(psd_config, *psd_cmd, psd_flags), psd_input, psd_segment, psd_overlap, psd_out,
                     out);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kUsageError;
}

}  // namespace mcw::cli
