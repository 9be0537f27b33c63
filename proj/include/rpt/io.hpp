#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rpt/ramanujan.hpp"

namespace rpt {

/// Plain CSV, one row per sample and one column per channel. Blank lines are
/// skipped. Throws ParseError (with 1-based line and column) on a
/// non-numeric or non-finite cell, a ragged row or an empty file.
Eigen::MatrixXd load_trial(const std::filesystem::path& path);
Eigen::MatrixXd parse_trial(std::istream& in, const std::string& name);

/// Writes with 17 significant digits so load_trial round-trips exactly.
void write_trial(const std::filesystem::path& path, const Eigen::MatrixXd& trial);

/// Rows [round(wait fs), round(wait fs) + round(window fs)). No resampling.
/// Throws std::invalid_argument when the window leaves the trial.
Eigen::MatrixXd window_trial(const Eigen::MatrixXd& trial, double fs, double wait, double window);

struct PeriodRounding {
  int period = 0;
  double error_hz = 0.0;  // fs / period - f
};

/// round(fs / f) with ties rounded up. Requires 0 < f < fs.
PeriodRounding period_from_frequency(double frequency, double fs);

struct ManifestClass {
  std::string label;
  double frequency = 0.0;
};

struct ManifestTrial {
  std::filesystem::path file;
  std::string label;
  std::string subject;
};

struct ManifestPrestim {
  std::filesystem::path file;
  std::string subject;
};

/// JSON dataset description:
///   {"fs": 256, "channels": 8,
///    "classes": [{"label": "a", "frequency": 9.25}, ...],
///    "trials": [{"file": "t01.csv", "label": "a", "subject": "s1"}, ...],
///    "prestim": [{"file": "p01.csv", "subject": "s1"}, ...]}
/// Relative file paths are resolved against the manifest's directory.
struct DatasetManifest {
  double fs = 0.0;
  Index channels = 0;
  std::vector<ManifestClass> classes;
  std::vector<ManifestTrial> trials;
  std::vector<ManifestPrestim> prestim;

  /// Index of a class label; throws std::invalid_argument if unknown.
  Index class_index(const std::string& label) const;
};

/// Throws ParseError for malformed JSON or missing fields and
/// std::invalid_argument for inconsistent content.
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace rpt
