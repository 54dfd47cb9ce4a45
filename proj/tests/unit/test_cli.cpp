#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mcwave/cli.hpp"
#include "mcwave/io.hpp"

using namespace mcw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mcwave");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mcwave_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::vector<double> data_column(const fs::path& csv) {
  std::ifstream in(csv);
  std::vector<double> v;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen && !std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-') {
      header_seen = true;
      continue;
    }
    v.push_back(std::stod(line));  // first column
  }
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("design-filter phydyas writes taps, response and report") {
    const auto dir = scratch("design");
    const auto r = run_cli({"design-filter", "--type", "phydyas", "--M", "64", "--out-dir", dir.string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(data_column(dir / "taps.csv").size() == 255);
    CHECK(fs::exists(dir / "freq_response.csv"));
    const auto rep = load(dir / "report.json");
    CHECK(rep.at("length") == 255);
    CHECK(rep.at("symmetric") == true);
    CHECK(rep.at("stopband_edge_spacings") == 1.5);
    CHECK(rep.at("attenuation_beyond_2_spacings_db").get<double>() > 60.0);
  }
}

TEST_SUITE("stopband_claim") {
  TEST_CASE("design-filter report states more than 60 dB beyond 1.5 spacings") {
    const auto dir = scratch("design_claim");
    REQUIRE(run_cli({"design-filter", "--type", "phydyas", "--M", "64", "--out-dir", dir.string()}).code == 0);
    CHECK(load(dir / "report.json").at("stopband_attenuation_db").get<double>() > 60.0);
  }
}

TEST_SUITE("cli") {

  TEST_CASE("design-filter rect gives constant taps") {
    const auto dir = scratch("rect");
    REQUIRE(run_cli({"design-filter", "--type", "rect", "--sps", "64", "--out-dir", dir.string()}).code == 0);
    const auto taps = data_column(dir / "taps.csv");
    REQUIRE(taps.size() == 64);
    for (double t : taps) CHECK(t == doctest::Approx(0.125));
  }

  TEST_CASE("design-filter rejects K=3") {
    const auto r = run_cli({"design-filter", "--type", "phydyas", "--K", "3", "--out-dir", scratch("k3").string()});
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.find("no coefficient table") != std::string::npos);
  }

  TEST_CASE("verify-nyquist audit exit codes") {
    const auto dir = scratch("nyq");
    const auto out = (dir / "r.json").string();
    CHECK(run_cli({"verify-nyquist", "--set", "ofdm", "--N", "8", "--sps", "64", "--tol", "1e-8", "--out", out}).code ==
          cli::kSuccess);
    CHECK(load(out).at("pass") == true);
    CHECK(run_cli({"verify-nyquist", "--set", "modified-ofdm", "--N", "8", "--sps", "16", "--tol", "1e-3", "--out",
                   out})
              .code == cli::kAuditFail);
    CHECK(load(out).at("max_adjacent_cross").get<double>() > 0.1);
    CHECK(run_cli({"verify-nyquist", "--set", "cmt", "--N", "8", "--stride", "16", "--span", "16", "--tol", "5e-3",
                   "--out", out})
              .code == cli::kSuccess);
    CHECK(run_cli({"verify-nyquist", "--set", "cmt", "--N", "8", "--stride", "16", "--span", "16", "--tol", "5e-3",
                   "--no-alternation", "--out", out})
              .code == cli::kAuditFail);
    CHECK(run_cli({"verify-nyquist", "--set", "bogus", "--out", out}).code == cli::kUsageError);
    CHECK(run_cli({"verify-nyquist", "--N", "notanumber"}).code == cli::kUsageError);
  }

  TEST_CASE("simulate oqam noiseless loopback") {
    const auto dir = scratch("oqam");
    const auto r = run_cli({"simulate", "--waveform", "oqam", "--M", "64", "--symbols", "32", "--out-dir",
                            dir.string()});
    REQUIRE(r.code == cli::kSuccess);
    const auto rep = load(dir / "report.json");
    CHECK(rep.at("metrics").at("evm_db").get<double>() < -55.0);
    CHECK(rep.at("latency_samples") == 254);
    CHECK(fs::exists(dir / "constellation.csv"));
    CHECK(fs::exists(dir / "psd.csv"));
    const auto psd_text = slurp(dir / "psd.csv");
    CHECK(psd_text.find("config_hash=") != std::string::npos);
    CHECK(psd_text.find("master_seed=1") != std::string::npos);
  }

  TEST_CASE("simulate ofdm through a 4-tap channel at 30 dB") {
    const auto dir = scratch("ofdm");
    const auto scenario = dir / "scenario.json";
    std::ofstream(scenario) << R"({
      "waveform": "ofdm", "num_subcarriers": 64, "cp_len": 16, "qam_order": 16,
      "num_symbols": 200, "master_seed": 7, "snr_db": [30],
      "channel": {"taps": [[1, 0], [0.4, 0.2], [0, -0.2], [0.1, 0.05]]},
      "output": {"dir": ")" + (dir / "out").string() + R"("}
    })";
    REQUIRE(run_cli({"simulate", "--config", scenario.string()}).code == cli::kSuccess);
    const auto rep = load(dir / "out" / "report.json");
    CHECK(rep.at("metrics").at("ber").get<double>() < 1e-3);
    CHECK(rep.at("snr_db") == 30.0);
  }

  TEST_CASE("simulate is byte-for-byte deterministic") {
    for (const char* w : {"ofdm", "cmt", "smt", "oqam"}) {
      CAPTURE(w);
      const auto a = scratch(std::string("det_a_") + w), b = scratch(std::string("det_b_") + w);
      const std::vector<std::string> common = {"simulate", "--waveform", w, "--M", "16", "--cp", "4",
                                               "--symbols", "8", "--snr", "12", "--seed", "99"};
      auto args_a = common, args_b = common;
      args_a.insert(args_a.end(), {"--out-dir", a.string()});
      args_b.insert(args_b.end(), {"--out-dir", b.string()});
      REQUIRE(run_cli(args_a).code == 0);
      REQUIRE(run_cli(args_b).code == 0);
      // The output directory is part of the config, so compare with it normalized.
      auto ja = load(a / "report.json"), jb = load(b / "report.json");
      ja["config"]["output"]["dir"] = jb["config"]["output"]["dir"] = "";
      ja["provenance"]["config_hash"] = jb["provenance"]["config_hash"] = "";
      CHECK(ja.dump() == jb.dump());
      CHECK(slurp(a / "constellation.csv").substr(slurp(a / "constellation.csv").find("tx_re")) ==
            slurp(b / "constellation.csv").substr(slurp(b / "constellation.csv").find("tx_re")));
    }
    const auto c = scratch("det_same");
    const std::vector<std::string> args = {"simulate", "--waveform", "oqam", "--M", "16", "--symbols", "8",
                                           "--snr", "5", "--out-dir", c.string()};
    REQUIRE(run_cli(args).code == 0);
    const auto first = slurp(c / "report.json");
    REQUIRE(run_cli(args).code == 0);
    CHECK(first == slurp(c / "report.json"));
  }

  TEST_CASE("simulate config errors exit 2") {
    const auto dir = scratch("bad");
    CHECK(run_cli({"simulate", "--waveform", "fmt"}).code == cli::kUsageError);
    CHECK(run_cli({"simulate", "--qam", "8"}).code == cli::kUsageError);
    CHECK(run_cli({"simulate", "--config", (dir / "missing.json").string()}).code == cli::kUsageError);
    CHECK(run_cli({"simulate", "--channel", (dir / "missing.csv").string()}).code == cli::kUsageError);
    std::ofstream(dir / "unknown.json") << R"({"wavefrom": "ofdm"})";
    CHECK(run_cli({"simulate", "--config", (dir / "unknown.json").string()}).code == cli::kUsageError);
    std::ofstream(dir / "broken.json") << "{";
    CHECK(run_cli({"simulate", "--config", (dir / "broken.json").string()}).code == cli::kUsageError);
    CHECK(run_cli({}).code == cli::kUsageError);
  }

  TEST_CASE("psd of an all-zero waveform is a numeric failure") {
    const auto dir = scratch("psd");
    write_waveform_binary(ComplexBuffer(1024), (dir / "zero.bin").string());
    const auto r = run_cli({"psd", "--input", (dir / "zero.bin").string(), "--segment", "128", "--out",
                            (dir / "p.csv").string()});
    CHECK(r.code == cli::kNumericFailure);
    CHECK(r.err.find("zero power") != std::string::npos);
  }

  TEST_CASE("psd from a scenario and from a saved waveform agree") {
    const auto dir = scratch("psd_ok");
    REQUIRE(run_cli({"simulate", "--waveform", "oqam", "--M", "16", "--symbols", "16", "--save-waveform",
                     "--out-dir", dir.string()})
                .code == 0);
    REQUIRE(run_cli({"psd", "--input", (dir / "waveform.bin").string(), "--segment", "64", "--out",
                     (dir / "a.csv").string()})
                .code == 0);
    REQUIRE(run_cli({"psd", "--waveform", "oqam", "--M", "16", "--symbols", "16", "--segment", "64", "--out",
                     (dir / "b.csv").string()})
                .code == 0);
    const auto a = slurp(dir / "a.csv"), b = slurp(dir / "b.csv");
    CHECK(a.substr(a.find("freq,")) == b.substr(b.find("freq,")));
  }

  TEST_CASE("ber-sweep writes one point per snr") {
    const auto dir = scratch("sweep");
    REQUIRE(run_cli({"ber-sweep", "--waveform", "ofdm", "--M", "16", "--cp", "4", "--symbols", "32", "--snr",
                     "0,10,20", "--out-dir", dir.string()})
                .code == 0);
    const auto j = load(dir / "ber_sweep.json");
    REQUIRE(j.at("points").size() == 3);
    CHECK(j.at("points")[0].at("ber").get<double>() >= j.at("points")[2].at("ber").get<double>());
    CHECK(run_cli({"ber-sweep", "--waveform", "ofdm", "--out-dir", dir.string()}).code == cli::kUsageError);
  }

  TEST_CASE("scenario json round trip and hash") {
    cli::ScenarioConfig c;
    c.waveform = "smt";
    c.snr_db = {3.0, 6.0};
    c.channel_taps = {cplx(1, 0), cplx(0.5, -0.25)};
    const auto back = cli::scenario_from_json(nlohmann::json::parse(cli::to_json(c).dump()));
    CHECK(cli::to_json(back).dump() == cli::to_json(c).dump());
    CHECK(cli::config_hash(back) == cli::config_hash(c));
    c.master_seed = 2;
    CHECK(cli::config_hash(back) != cli::config_hash(c));
  }
}
