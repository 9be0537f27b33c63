#include <map>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "rpt/experiment.hpp"

namespace {

struct Defaults {
  std::vector<int> periods;
  std::vector<rpt::Index> lengths;
  double snr_db = -15.0;
  long trials = 1000;
  rpt::Index channels = 1;
  double rho = 0.0;
};

// Flags shared by every subcommand, bound to that subcommand's config.
void add_shared(CLI::App* sub, rpt::ExperimentConfig& c) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--trials", c.trials, "Trials per class")->capture_default_str();
  sub->add_option("--snr-db", c.snr_db, "Per-channel SNR in dB")->capture_default_str();
  sub->add_option("--length", c.lengths, "Trial length(s) in samples, comma separated")->delimiter(',');
  sub->add_option("--periods", c.periods, "Class periods in samples, comma separated")->delimiter(',');
  sub->add_option("--channels", c.channels, "Electrode count")->capture_default_str();
  sub->add_option("--rho", c.rho, "Spatial correlation rho^d (0 = uncorrelated)")->capture_default_str();
  sub->add_option("--out", c.out, "Output CSV path")->required();
  sub->add_option("--method", c.method, "rpt, cca, ccaN or psda (comma list in accuracy mode)")->capture_default_str();
  sub->add_option("--harmonics", c.harmonics, "CCA harmonic count N_h")->capture_default_str();
  sub->add_option("--wait", c.wait, "Wait time after stimulus onset (s)")->capture_default_str();
  sub->add_option("--window", c.window, "Window length (s)")->capture_default_str();
  sub->add_option("--fs", c.fs, "Sampling rate (Hz)")->capture_default_str();
  sub->add_option("--representation", c.representation, "fixed, per-trial or auto")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = OpenMP default)")->capture_default_str();
}

rpt::ExperimentConfig preset(rpt::Mode mode, const Defaults& d) {
  rpt::ExperimentConfig c;
  c.mode = mode;
  c.periods = d.periods;
  c.lengths = d.lengths;
  c.snr_db = d.snr_db;
  c.trials = d.trials;
  c.channels = d.channels;
  c.rho = d.rho;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramanujan periodicity transform detectors: synthetic experiments and trial classification"};
  app.set_version_flag("--version", std::string(rpt::kVersion));
  app.require_subcommand(1);

  std::map<std::string, rpt::ExperimentConfig> configs{
      {"dict", preset(rpt::Mode::Dict, {{10}, {10}})},
      {"roc", preset(rpt::Mode::Roc, {{25, 15}, {100}, -15.0, 2500})},
      {"accuracy", preset(rpt::Mode::Accuracy, {{32, 18}, {128, 256, 384, 512}, -15.0, 1000})},
      {"gap", preset(rpt::Mode::Gap, {{32, 18}, {320, 480, 640, 800, 960, 1120, 1280}, -15.0, 5000})},
      {"tradeoff", preset(rpt::Mode::Tradeoff, {{}, {50}, -10.0, 500, 1, 0.5})},
      {"mismatch",
       preset(rpt::Mode::Mismatch, {{28, 26, 25, 24, 23, 22, 21, 20, 18}, {64, 128, 192, 256}, -15.0, 200, 8, 0.7})},
      {"classify", preset(rpt::Mode::Classify, {})},
  };

  std::map<std::string, CLI::App*> subs;
  subs["dict"] = app.add_subcommand("dict", "Dictionary block layout (and optional integer dump)");
  subs["roc"] = app.add_subcommand("roc", "Empirical and analytic ROC of the binary detector");
  subs["accuracy"] = app.add_subcommand("accuracy", "Classification accuracy versus trial length");
  subs["gap"] = app.add_subcommand("gap", "Gap between the perfect measurement bound and the detector");
  subs["tradeoff"] = app.add_subcommand("tradeoff", "Error exponent versus class count and electrode count");
  subs["mismatch"] = app.add_subcommand("mismatch", "Known, estimated and ignored spatial covariance");
  subs["classify"] = app.add_subcommand("classify", "Classify recorded trials listed in a dataset manifest");
  for (auto& [name, sub] : subs) add_shared(sub, configs[name]);

  subs["dict"]->add_flag("--dump", configs["dict"].dump, "Also write the integer matrix");
  subs["gap"]->add_option("--alpha", configs["gap"].alpha, "False-alarm level")->capture_default_str();
  subs["tradeoff"]->add_option("--first-period", configs["tradeoff"].first_period, "Period of class 0")
      ->capture_default_str();
  subs["tradeoff"]->add_option("--classes", configs["tradeoff"].class_counts, "Class counts M (default 2..11)")
      ->delimiter(',');
  subs["tradeoff"]->add_option("--channel-counts", configs["tradeoff"].channel_counts, "Electrode counts (default 1,2,4,8)")
      ->delimiter(',');
  subs["mismatch"]->add_option("--prestim-rows", configs["mismatch"].prestim_rows, "Pre-stimulus rows for estimation")
      ->capture_default_str();
  subs["classify"]->add_option("--dataset", configs["classify"].dataset, "Dataset manifest (JSON)")->required();

  std::string meta_path;
  auto* rerun = app.add_subcommand("rerun", "Repeat a run from its .meta.json record");
  rerun->add_option("meta", meta_path, "Metadata record")->required();
  std::string rerun_out;
  rerun->add_option("--out", rerun_out, "Override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    rpt::ExperimentConfig config;
    if (rerun->parsed()) {
      std::ifstream in(meta_path);
      if (!in) throw std::runtime_error("cannot open " + meta_path);
      std::stringstream buf;
      buf << in.rdbuf();
      config = rpt::config_from_json(buf.str());
      if (!rerun_out.empty()) config.out = rerun_out;
    } else {
      for (auto& [name, sub] : subs)
        if (sub->parsed()) config = configs[name];
    }
    const auto result = rpt::run(config);
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "rpt: error: " << e.what() << '\n';
    return 1;
  }
}
