#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcwave/channel.hpp"
#include "mcwave/grid.hpp"
#include "mcwave/metrics.hpp"

namespace mcw::cli {

/// Stable exit-code contract.
enum ExitCode : int {
  kSuccess = 0,
  kAuditFail = 1,
  kUsageError = 2,
  kNumericFailure = 3,
};

struct PrototypeChoice {
  std::string type;  // "rect" | "rrc" | "phydyas"; empty = waveform default
  double rolloff = 1.0;
  int span = 8;
  std::string p3 = "symmetric";  // "symmetric" | "printed"
};

/// Declarative scenario. Loaded from a JSON file whose keys mirror these
/// field names; command-line flags override file values.
struct ScenarioConfig {
  std::string waveform = "ofdm";  // ofdm | cmt | smt | oqam
  int num_subcarriers = 64;
  int overlap = 4;
  int cp_len = 16;
  /// CMT/SMT real-symbol interval in samples; 0 selects num_subcarriers.
  int stride = 0;
  std::string oqam_scheme = "phydyas";
  PrototypeChoice prototype;
  ComplexBuffer channel_taps{cplx{1.0, 0.0}};
  std::string channel_file;
  std::vector<double> snr_db;
  int qam_order = 16;
  int num_symbols = 64;
  std::uint64_t master_seed = 1;
  std::string output_dir = ".";
  int psd_segment = 256;
  double psd_overlap = 0.5;
  int leakage_extent = 2;

  /// Throws std::invalid_argument on any inconsistency.
  void validate() const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);
/// FNV-1a of the canonical JSON of the resolved config.
std::string config_hash(const ScenarioConfig& cfg);

struct SimulationResult {
  ComplexBuffer tx_waveform;
  SymbolGrid tx_symbols;
  SymbolGrid rx_symbols;
  MetricsReport metrics;
  std::optional<double> snr_db;
  int latency_samples = 0;
};

/// tx -> channel -> rx -> metrics. Noiseless when snr_db is empty.
/// Deterministic in (cfg, snr_db).
SimulationResult simulate(const ScenarioConfig& cfg, std::optional<double> snr_db);

/// Transmit waveform only.
ComplexBuffer synthesize_waveform(const ScenarioConfig& cfg);

/// Entry point behind the `mcwave` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcw::cli
