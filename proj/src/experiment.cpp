#include "rpt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rpt/errors.hpp"
#include "rpt/io.hpp"

namespace rpt {

namespace {

const std::map<Mode, std::string>& mode_names() {
  static const std::map<Mode, std::string> names{
      {Mode::Dict, "dict"},         {Mode::Roc, "roc"},           {Mode::Accuracy, "accuracy"},
      {Mode::Gap, "gap"},           {Mode::Tradeoff, "tradeoff"}, {Mode::Mismatch, "mismatch"},
      {Mode::Classify, "classify"},
  };
  return names;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path), path_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
  }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

SyntheticSpec synthetic_spec(const ExperimentConfig& c) {
  SyntheticSpec s;
  s.periods = c.periods;
  s.length = c.lengths.empty() ? 0 : c.lengths.front();
  s.channels = c.channels;
  s.snr_db = c.snr_db;
  s.spatial = c.rho > 0.0 ? SpatialModel::rho_distance(c.rho) : SpatialModel::identity();
  s.seed = c.seed;
  s.representation = c.resolved_representation();
  return s;
}

std::vector<MethodSpec> methods_of(const ExperimentConfig& c) {
  std::vector<MethodSpec> out;
  for (const auto& token : split_list(c.method)) out.push_back(parse_method(token, c.harmonics));
  if (out.empty()) throw std::invalid_argument("no method given");
  return out;
}

void run_dict(const ExperimentConfig& c, RunResult& r) {
  const int p_max = *std::max_element(c.periods.begin(), c.periods.end());
  const DictionaryMatrix dict(p_max, static_cast<int>(c.lengths.front()));
  CsvWriter csv(c.out, {"period", "totient", "column_begin", "column_end"});
  for (int p = 1; p <= p_max; ++p) {
    const auto range = dict.range(p);
    csv.row({std::to_string(p), std::to_string(euler_totient(p)), std::to_string(range.begin),
             std::to_string(range.end())});
  }
  csv.close();
  r.files.push_back(c.out);
  if (c.dump) {
    const auto path = sibling(c.out, ".matrix.txt");
    std::ofstream out(path);
    write_dictionary(out, dict);
    if (!out) throw std::runtime_error("write failed for " + path.string());
    r.files.push_back(path);
  }
}

void run_roc_mode(const ExperimentConfig& c, const RunOptions& opts, RunResult& r) {
  const auto res = run_roc(synthetic_spec(c), c.trials, {}, opts);
  CsvWriter csv(c.out, {"gamma", "pf_emp", "pd_emp", "pf_theory", "pd_theory"});
  for (std::size_t i = 0; i < res.empirical.points.size(); ++i) {
    const auto& e = res.empirical.points[i];
    const auto& t = res.theory.points[i];
    csv.row({num(e.gamma), num(e.pf), num(e.pd), num(t.pf), num(t.pd)});
  }
  csv.close();
  r.files.push_back(c.out);
}

void run_accuracy_mode(const ExperimentConfig& c, const RunOptions& opts, RunResult& r) {
  const auto spec = synthetic_spec(c);
  const auto methods = methods_of(c);
  const auto rows = run_method_comparison(spec, c.lengths, methods, c.trials, c.fs, opts);
  std::map<Index, double> theory;
  for (Index length : c.lengths) {
    SyntheticSpec s = spec;
    s.length = length;
    theory[length] = theory_error_rate(Scenario(s));
  }
  CsvWriter csv(c.out, {"length", "method", "correct", "trials", "accuracy", "ci_lo", "ci_hi", "p_e", "p_e_theory"});
  for (const auto& row : rows) {
    const double t = row.method == "rpt" ? theory[row.length] : std::nan("");
    csv.row({std::to_string(row.length), row.method, std::to_string(row.correct), std::to_string(row.trials),
             num(row.accuracy), num(row.ci.lo), num(row.ci.hi), num(1.0 - row.accuracy), num(t)});
  }
  csv.close();
  r.files.push_back(c.out);
}

void run_gap_mode(const ExperimentConfig& c, const RunOptions& opts, RunResult& r) {
  const auto rows = run_gap_experiment(synthetic_spec(c), c.lengths, c.trials, c.alpha, opts);
  CsvWriter csv(c.out, {"length", "ls", "pd_emp", "pd_ci_lo", "pd_ci_hi", "pd_theory", "pmb", "gap_emp", "gap_theory",
                        "gap_closed"});
  for (const auto& g : rows)
    csv.row({std::to_string(g.length), num(g.ls), num(g.pd_emp), num(g.pd_ci.lo), num(g.pd_ci.hi), num(g.pd_theory),
             num(g.pmb), num(g.gap_emp), num(g.gap_theory), num(g.gap_closed)});
  csv.close();
  r.files.push_back(c.out);
}

void run_tradeoff_mode(const ExperimentConfig& c, const RunOptions& opts, RunResult& r) {
  std::vector<int> counts = c.class_counts;
  if (counts.empty())
    for (int m = 2; m <= 11; ++m) counts.push_back(m);
  std::vector<Index> channels = c.channel_counts;
  if (channels.empty()) channels = {1, 2, 4, 8};
  const auto rows = run_tradeoff(synthetic_spec(c), c.first_period, counts, channels, c.trials, c.harmonics, c.fs, opts);
  CsvWriter csv(c.out, {"channels", "classes", "log2m", "trials", "p_e_rpt", "p_e_cca", "exponent_rpt", "exponent_cca"});
  for (const auto& t : rows)
    csv.row({std::to_string(t.channels), std::to_string(t.classes), num(t.log2m), std::to_string(t.trials),
             num(t.p_e_rpt), num(t.p_e_cca), num(t.exponent_rpt), num(t.exponent_cca)});
  csv.close();
  r.files.push_back(c.out);
}

void run_mismatch_mode(const ExperimentConfig& c, const RunOptions& opts, RunResult& r) {
  const auto rows = run_mismatch_experiment(synthetic_spec(c), c.lengths, c.trials, c.prestim_rows, opts);
  CsvWriter csv(c.out, {"length", "trials", "acc_known", "acc_estimated", "acc_identity", "p_value"});
  for (const auto& m : rows) {
    const double n = static_cast<double>(m.trials);
    csv.row({std::to_string(m.length), std::to_string(m.trials), num(m.correct_known / n),
             num(m.correct_estimated / n), num(m.correct_identity / n), num(m.p_value_known_vs_identity)});
  }
  csv.close();
  r.files.push_back(c.out);
}

void run_classify_mode(const ExperimentConfig& c, const RunOptions& opts, RunResult& r) {
  const auto manifest = load_manifest(c.dataset);
  const double fs = manifest.fs;
  const auto methods = methods_of(c);
  if (methods.size() != 1) throw std::invalid_argument("classify takes a single method");
  const auto& method = methods.front();

  std::vector<int> periods;
  std::vector<double> freqs;
  for (const auto& cls : manifest.classes) {
    periods.push_back(period_from_frequency(cls.frequency, fs).period);
    freqs.push_back(cls.frequency);
  }
  if (std::set<int>(periods.begin(), periods.end()).size() != periods.size())
    throw std::invalid_argument("classify: two goal frequencies round to the same period");

  auto load_checked = [&manifest](const std::filesystem::path& p) {
    auto m = load_trial(p);
    if (m.cols() != manifest.channels)
      throw std::invalid_argument(p.string() + ": " + std::to_string(m.cols()) + " channels, manifest says " +
                                  std::to_string(manifest.channels));
    return m;
  };

  std::vector<Eigen::MatrixXd> trials;
  std::vector<Index> labels;
  for (const auto& t : manifest.trials) {
    trials.push_back(window_trial(load_checked(t.file), fs, c.wait, c.window));
    labels.push_back(manifest.class_index(t.label));
  }
  if (trials.empty()) throw std::invalid_argument("classify: manifest lists no trials");
  const Index length = trials.front().rows();
  const int p_max = *std::max_element(periods.begin(), periods.end());
  if (length < p_max)
    throw std::invalid_argument("classify: window of " + std::to_string(length) + " samples is shorter than period " +
                                std::to_string(p_max));

  // Spatial covariance per subject from its pre-stimulus files, pooled over
  // all subjects when a subject has none, identity when there are none at all.
  std::map<std::string, std::vector<Eigen::MatrixXd>> prestim;
  std::vector<Eigen::MatrixXd> pooled;
  for (const auto& p : manifest.prestim) {
    auto m = load_checked(p.file);
    prestim[p.subject].push_back(m);
    pooled.push_back(std::move(m));
  }
  const auto fallback = pooled.empty() ? SpatialCovariance::identity(manifest.channels)
                                       : estimate_spatial_covariance(pooled);

  const DictionaryMatrix dict(p_max, static_cast<int>(length));
  std::map<std::string, std::shared_ptr<const MaryDetector>> detectors;
  std::vector<CcaReference> refs;
  if (method.kind == MethodKind::Rpt) {
    detectors[""] = std::make_shared<const MaryDetector>(dict, periods, fallback);
    for (const auto& [subject, segs] : prestim)
      detectors[subject] = std::make_shared<const MaryDetector>(dict, periods, estimate_spatial_covariance(segs));
  } else if (method.kind == MethodKind::Cca) {
    for (double f : freqs) refs.emplace_back(reference_matrix(f, method.harmonics, fs, length));
  }

  std::vector<Index> decisions(trials.size());
  for_each_index(static_cast<Index>(trials.size()), opts, [&](Index k) {
    const auto& y = trials[static_cast<std::size_t>(k)];
    switch (method.kind) {
      case MethodKind::Rpt: {
        auto it = detectors.find(manifest.trials[static_cast<std::size_t>(k)].subject);
        if (it == detectors.end()) it = detectors.find("");
        decisions[static_cast<std::size_t>(k)] = mary_decide(y, *it->second);
        break;
      }
      case MethodKind::Cca:
        decisions[static_cast<std::size_t>(k)] = cca_decide(y, refs);
        break;
      case MethodKind::Psda:
        decisions[static_cast<std::size_t>(k)] = psda_decide(y.col(0), freqs, fs);
        break;
    }
  });

  const auto m_count = static_cast<Index>(manifest.classes.size());
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(m_count, m_count);
  for (std::size_t k = 0; k < trials.size(); ++k) confusion(labels[k], decisions[k]) += 1.0;

  std::vector<std::string> header{"true"};
  for (const auto& cls : manifest.classes) header.push_back(cls.label);
  CsvWriter csv(c.out, header);
  for (Index i = 0; i < m_count; ++i) {
    std::vector<std::string> row{manifest.classes[static_cast<std::size_t>(i)].label};
    for (Index j = 0; j < m_count; ++j) row.push_back(std::to_string(std::lround(confusion(i, j))));
    csv.row(row);
  }
  csv.close();
  r.files.push_back(c.out);

  const long correct = std::lround(confusion.trace());
  const auto n = static_cast<long>(trials.size());
  const double accuracy = static_cast<double>(correct) / static_cast<double>(n);
  const auto summary_path = sibling(c.out, ".summary.csv");
  CsvWriter summary(summary_path, {"method", "trials", "correct", "accuracy", "itr_bits_per_min", "window_s", "wait_s"});
  summary.row({method.label(), std::to_string(n), std::to_string(correct), num(accuracy),
               num(itr(static_cast<int>(m_count), accuracy, c.window)), num(c.window), num(c.wait)});
  summary.close();
  r.files.push_back(summary_path);
}

}  // namespace

std::string mode_name(Mode mode) { return mode_names().at(mode); }

Mode parse_mode(const std::string& name) {
  for (const auto& [m, n] : mode_names())
    if (n == name) return m;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

MethodSpec parse_method(const std::string& token, int default_harmonics) {
  if (token == "rpt") return {MethodKind::Rpt};
  if (token == "psda") return {MethodKind::Psda};
  if (token == "cca") return {MethodKind::Cca, default_harmonics};
  if (token.rfind("cca", 0) == 0 && token.size() > 3) {
    int h = 0;
    const auto [ptr, ec] = std::from_chars(token.data() + 3, token.data() + token.size(), h);
    if (ec == std::errc() && ptr == token.data() + token.size() && h >= 1) return {MethodKind::Cca, h};
  }
  throw std::invalid_argument("unknown method '" + token + "' (expected rpt, cca, ccaN or psda)");
}

RepresentationPolicy ExperimentConfig::resolved_representation() const {
  if (representation == "fixed") return RepresentationPolicy::Fixed;
  if (representation == "per-trial") return RepresentationPolicy::PerTrial;
  if (representation != "auto") throw std::invalid_argument("representation must be fixed, per-trial or auto");
  return (mode == Mode::Roc || mode == Mode::Accuracy || mode == Mode::Gap) ? RepresentationPolicy::Fixed
                                                                            : RepresentationPolicy::PerTrial;
}

void ExperimentConfig::validate() const {
  auto fail = [this](const std::string& what) {
    throw std::invalid_argument(mode_name(mode) + ": " + what);
  };
  if (out.empty()) fail("--out is required");
  if (threads < 0) fail("threads must be >= 0");
  resolved_representation();
  if (!(wait >= 0.0)) fail("wait must be >= 0");
  if (!(window > 0.0)) fail("window must be > 0");
  if (mode == Mode::Classify) {
    if (dataset.empty()) fail("a dataset manifest is required");
    methods_of(*this);
    return;
  }
  if (mode != Mode::Tradeoff && periods.empty()) fail("class periods are required");
  for (int p : periods)
    if (p < 1) fail("periods must be positive");
  if (lengths.empty()) fail("at least one length is required");
  for (Index l : lengths)
    if (l < 1) fail("lengths must be positive");
  if (mode == Mode::Dict) return;
  if (trials < 1) fail("trials must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) fail("rho must lie in [0, 1)");
  if (channels < 1) fail("channels must be >= 1");
  if (!(fs > 0.0)) fail("fs must be > 0");
  if ((mode == Mode::Roc || mode == Mode::Gap) && periods.size() != 2) fail("exactly two periods are required");
  if ((mode == Mode::Roc || mode == Mode::Gap) && channels != 1) fail("single channel only");
  if (mode == Mode::Roc && lengths.size() != 1) fail("exactly one length is required");
  if (mode == Mode::Gap && !(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (mode == Mode::Tradeoff && first_period < 1) fail("first period must be positive");
  if (mode == Mode::Mismatch && (channels < 2 || rho <= 0.0)) fail("needs channels >= 2 and rho > 0");
  if (mode == Mode::Mismatch && prestim_rows <= channels) fail("prestim rows must exceed the channel count");
  if (periods.size() < 2 && mode != Mode::Tradeoff) fail("at least two periods are required");
  methods_of(*this);
}

std::string config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(c.mode);
  j["periods"] = c.periods;
  j["lengths"] = c.lengths;
  j["channels"] = c.channels;
  j["snr_db"] = c.snr_db;
  j["rho"] = c.rho;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["representation"] = c.representation;
  j["method"] = c.method;
  j["harmonics"] = c.harmonics;
  j["alpha"] = c.alpha;
  j["first_period"] = c.first_period;
  j["class_counts"] = c.class_counts;
  j["channel_counts"] = c.channel_counts;
  j["prestim_rows"] = c.prestim_rows;
  j["dump"] = c.dump;
  j["dataset"] = c.dataset.string();
  j["wait"] = c.wait;
  j["window"] = c.window;
  j["fs"] = c.fs;
  j["out"] = c.out.string();
  j["threads"] = c.threads;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& src = j.contains("config") ? j.at("config") : j;
  ExperimentConfig c;
  c.mode = parse_mode(src.at("mode").get<std::string>());
  c.periods = src.value("periods", c.periods);
  c.lengths = src.value("lengths", c.lengths);
  c.channels = src.value("channels", c.channels);
  c.snr_db = src.value("snr_db", c.snr_db);
  c.rho = src.value("rho", c.rho);
  c.seed = src.value("seed", c.seed);
  c.trials = src.value("trials", c.trials);
  c.representation = src.value("representation", c.representation);
  c.method = src.value("method", c.method);
  c.harmonics = src.value("harmonics", c.harmonics);
  c.alpha = src.value("alpha", c.alpha);
  c.first_period = src.value("first_period", c.first_period);
  c.class_counts = src.value("class_counts", c.class_counts);
  c.channel_counts = src.value("channel_counts", c.channel_counts);
  c.prestim_rows = src.value("prestim_rows", c.prestim_rows);
  c.dump = src.value("dump", c.dump);
  c.dataset = src.value("dataset", std::string{});
  c.wait = src.value("wait", c.wait);
  c.window = src.value("window", c.window);
  c.fs = src.value("fs", c.fs);
  c.out = src.value("out", std::string{});
  c.threads = src.value("threads", c.threads);
  return c;
}

RunResult run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  if (config.out.has_parent_path()) std::filesystem::create_directories(config.out.parent_path());
  RunOptions opts;
  opts.threads = config.threads;

  RunResult result;
  switch (config.mode) {
    case Mode::Dict:
      run_dict(config, result);
      break;
    case Mode::Roc:
      run_roc_mode(config, opts, result);
      break;
    case Mode::Accuracy:
      run_accuracy_mode(config, opts, result);
      break;
    case Mode::Gap:
      run_gap_mode(config, opts, result);
      break;
    case Mode::Tradeoff:
      run_tradeoff_mode(config, opts, result);
      break;
    case Mode::Mismatch:
      run_mismatch_mode(config, opts, result);
      break;
    case Mode::Classify:
      run_classify_mode(config, opts, result);
      break;
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json meta;
  meta["tool"] = "rpt";
  meta["version"] = kVersion;
  meta["config"] = nlohmann::ordered_json::parse(config_to_json(config));
  meta["representation_resolved"] =
      config.resolved_representation() == RepresentationPolicy::Fixed ? "fixed" : "per-trial";
  meta["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                  std::to_string(EIGEN_MINOR_VERSION);
  meta["compiler"] = __VERSION__;
  meta["workers"] = config.threads > 0 ? config.threads : available_workers();
  meta["wall_seconds"] = result.seconds;
  std::vector<std::string> outputs;
  for (const auto& f : result.files) outputs.push_back(f.filename().string());
  meta["outputs"] = outputs;

  const auto meta_path = sibling(config.out, ".meta.json");
  std::ofstream out(meta_path);
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + meta_path.string());
  result.files.push_back(meta_path);
  return result;
}

}  // namespace rpt
