#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rpt/harness.hpp"

namespace rpt {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { Dict, Roc, Accuracy, Gap, Tradeoff, Mismatch, Classify };

std::string mode_name(Mode mode);
/// Throws std::invalid_argument for an unknown name.
Mode parse_mode(const std::string& name);

/// "rpt", "psda", "cca" (uses default_harmonics) or "ccaN".
MethodSpec parse_method(const std::string& token, int default_harmonics);

struct ExperimentConfig {
  Mode mode = Mode::Roc;

  // Synthetic scenario.
  std::vector<int> periods;
  std::vector<Index> lengths;
  Index channels = 1;
  double snr_db = -15.0;
  double rho = 0.0;  // 0 selects uncorrelated electrodes
  std::uint64_t seed = 1;
  long trials = 1000;  // per class
  /// "fixed", "per-trial" or "auto" (fixed for roc/accuracy/gap, per-trial otherwise).
  std::string representation = "auto";

  // Methods.
  std::string method = "rpt";  // comma-separated list in accuracy mode
  int harmonics = kDefaultHarmonics;

  // Mode-specific.
  double alpha = 0.5;                  // gap
  int first_period = 10;               // tradeoff
  std::vector<int> class_counts;       // tradeoff
  std::vector<Index> channel_counts;   // tradeoff
  Index prestim_rows = 10000;          // mismatch
  bool dump = false;                   // dict: also write the integer matrix

  // Real data and timing.
  std::filesystem::path dataset;
  double wait = 0.0;
  double window = 1.0;
  double fs = 256.0;

  std::filesystem::path out;
  int threads = 0;

  /// Throws std::invalid_argument when a mode-required field is missing or invalid.
  void validate() const;
  RepresentationPolicy resolved_representation() const;
};

/// JSON round-trip of the configuration; the metadata record embeds it.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

struct RunResult {
  std::vector<std::filesystem::path> files;  // result tables, then the metadata record
  double seconds = 0.0;
};

/// Runs one experiment and writes its CSV table(s) plus "<stem>.meta.json".
RunResult run(const ExperimentConfig& config);

}  // namespace rpt
