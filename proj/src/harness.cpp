#include "rpt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "rpt/errors.hpp"

namespace rpt {

Interval wilson_interval(long successes, long trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials > 0");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double two_proportion_p_value(long k1, long n1, long k2, long n2) {
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("two_proportion_p_value: empty sample");
  const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  if (!(se > 0.0)) return 1.0;
  return q_function((p1 - p2) / se);
}

std::vector<Eigen::MatrixXd> classify_scenario(const Scenario& scenario, const std::vector<Classifier>& classifiers,
                                               long per_class, const RunOptions& opts) {
  if (per_class < 1) throw std::invalid_argument("classify_scenario: need at least one trial per class");
  const Index m_count = scenario.classes();
  const auto c_count = static_cast<Index>(classifiers.size());
  const Index total = m_count * per_class;
  std::vector<Index> decisions(static_cast<std::size_t>(total * c_count), 0);
  for_each_index(total, opts, [&](Index k) {
    const Index m = k / per_class;
    const auto i = static_cast<std::uint64_t>(k % per_class);
    const Eigen::MatrixXd y = scenario.trial(m, i);
    for (Index c = 0; c < c_count; ++c)
      decisions[static_cast<std::size_t>(k * c_count + c)] = classifiers[static_cast<std::size_t>(c)](y);
  });
  std::vector<Eigen::MatrixXd> confusion(static_cast<std::size_t>(c_count), Eigen::MatrixXd::Zero(m_count, m_count));
  for (Index k = 0; k < total; ++k)
    for (Index c = 0; c < c_count; ++c) {
      const Index d = decisions[static_cast<std::size_t>(k * c_count + c)];
      if (d < 0 || d >= m_count) throw std::logic_error("classify_scenario: classifier returned an invalid class");
      confusion[static_cast<std::size_t>(c)](k / per_class, d) += 1.0;
    }
  return confusion;
}

BinaryStatistics binary_statistics(const Scenario& scenario, const BinaryDetector& det, long per_class,
                                   const RunOptions& opts) {
  if (scenario.classes() != 2) throw std::invalid_argument("binary_statistics: scenario must have two classes");
  if (per_class < 1) throw std::invalid_argument("binary_statistics: need at least one trial per class");
  std::vector<double> all(static_cast<std::size_t>(2 * per_class));
  for_each_index(2 * per_class, opts, [&](Index k) {
    const Index m = k / per_class;
    const Eigen::MatrixXd y = scenario.trial(m, static_cast<std::uint64_t>(k % per_class));
    all[static_cast<std::size_t>(k)] = binary_statistic(y.col(0), det);
  });
  const auto mid = all.begin() + per_class;
  return {std::vector<double>(all.begin(), mid), std::vector<double>(mid, all.end())};
}

namespace {

void require_theory_scenario(const Scenario& sc, const char* who) {
  if (sc.classes() != 2 || sc.spec().channels != 1 || sc.spec().representation != RepresentationPolicy::Fixed)
    throw std::invalid_argument(std::string(who) + ": needs two classes, one channel and the Fixed policy");
}

int period(const Scenario& sc, Index m) { return sc.spec().periods[static_cast<std::size_t>(m)]; }

long correct_count(const Eigen::MatrixXd& confusion) { return std::lround(confusion.trace()); }
long total_count(const Eigen::MatrixXd& confusion) { return std::lround(confusion.sum()); }

SyntheticSpec with_length(SyntheticSpec spec, Index length) {
  spec.length = length;
  return spec;
}

}  // namespace

ChiSquareParams scenario_params(const Scenario& sc) {
  require_theory_scenario(sc, "scenario_params");
  const auto& dict = sc.dictionary();
  const auto a = projection_operator(dict, support_set(dict, period(sc, 0)));
  const auto b = projection_operator(dict, support_set(dict, period(sc, 1)));
  return chi_params_from_means(sc.signal(0, 0).col(0), sc.signal(1, 0).col(0), a, b);
}

ChiSquareParams scenario_orthogonal_params(const Scenario& sc) {
  require_theory_scenario(sc, "scenario_orthogonal_params");
  const auto ops = orthogonal_operators(sc.dictionary(), period(sc, 0), period(sc, 1));
  return chi_params_from_means(sc.signal(0, 0).col(0), sc.signal(1, 0).col(0), ops.first, ops.second);
}

double theory_error_rate(const Scenario& sc) {
  if (sc.classes() != 2 || sc.spec().channels != 1 || sc.spec().representation != RepresentationPolicy::Fixed)
    return std::numeric_limits<double>::quiet_NaN();
  const auto r = pd_pf(0.0, gaussian_general(scenario_params(sc)));
  return 0.5 * (r.pf + 1.0 - r.pd);
}

RocExperiment run_roc(const SyntheticSpec& spec, long per_class, std::vector<double> gammas, const RunOptions& opts) {
  const Scenario sc(spec);
  require_theory_scenario(sc, "run_roc");
  const auto det = make_binary_detector(sc.dictionary(), period(sc, 0), period(sc, 1));
  RocExperiment out;
  out.params = scenario_params(sc);
  const auto theory = gaussian_general(out.params);
  if (gammas.empty()) gammas = roc_gamma_grid(theory);
  out.stats = binary_statistics(sc, det, per_class, opts);
  out.empirical = empirical_roc(out.stats.h0, out.stats.h1, gammas);
  out.theory = analytic_roc(theory, gammas);
  const double n = static_cast<double>(per_class);
  for (const auto& p : out.empirical.points) {
    out.pf_ci.push_back(wilson_interval(std::lround(p.pf * n), per_class));
    out.pd_ci.push_back(wilson_interval(std::lround(p.pd * n), per_class));
  }
  return out;
}

std::vector<AccuracyRow> run_accuracy_vs_length(const SyntheticSpec& spec, const std::vector<Index>& lengths,
                                                long per_class, const RunOptions& opts) {
  std::vector<AccuracyRow> rows;
  for (Index length : lengths) {
    const Scenario sc(with_length(spec, length));
    const auto rpt = make_classifier({MethodKind::Rpt}, sc, 1.0, sc.noise_covariance());
    const auto confusion = classify_scenario(sc, {rpt}, per_class, opts).front();
    AccuracyRow row;
    row.length = length;
    row.correct = correct_count(confusion);
    row.trials = total_count(confusion);
    row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.trials);
    row.ci = wilson_interval(row.correct, row.trials);
    row.p_e = p_e_average(confusion);
    row.p_e_theory = theory_error_rate(sc);
    rows.push_back(row);
  }
  return rows;
}

std::vector<GapRow> run_gap_experiment(const SyntheticSpec& spec, const std::vector<Index>& lengths, long per_class,
                                       double alpha, const RunOptions& opts) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("run_gap_experiment: alpha must lie in (0, 1)");
  std::vector<GapRow> rows;
  for (Index length : lengths) {
    const Scenario sc(with_length(spec, length));
    require_theory_scenario(sc, "run_gap_experiment");
    const auto det = make_binary_detector(sc.dictionary(), period(sc, 0), period(sc, 1));
    auto stats = binary_statistics(sc, det, per_class, opts);
    std::sort(stats.h0.begin(), stats.h0.end());
    // Smallest sample threshold whose empirical false-alarm rate is at most alpha.
    const auto keep = static_cast<long>(std::floor(alpha * static_cast<double>(per_class)));
    const double threshold = stats.h0[static_cast<std::size_t>(per_class - keep - 1)];
    const long detections = std::count_if(stats.h1.begin(), stats.h1.end(), [&](double s) { return s > threshold; });

    GapRow row;
    row.length = length;
    row.ls = static_cast<double>(length) * spec.snr();
    row.pd_emp = static_cast<double>(detections) / static_cast<double>(per_class);
    row.pd_ci = wilson_interval(detections, per_class);
    row.pd_theory = np_pd(alpha, scenario_params(sc));
    row.pmb = pmb_pd_from_means(alpha, sc.signal(0, 0).col(0), sc.signal(1, 0).col(0));
    row.gap_emp = row.pmb - row.pd_emp;
    row.gap_theory = row.pmb - row.pd_theory;
    row.gap_closed = gap(static_cast<double>(length), spec.snr());
    rows.push_back(row);
  }
  return rows;
}

std::vector<TradeoffRow> run_tradeoff(const SyntheticSpec& spec, int first_period, const std::vector<int>& class_counts,
                                      const std::vector<Index>& channel_counts, long per_class, int cca_harmonics,
                                      double fs, const RunOptions& opts) {
  if (first_period < 1) throw std::invalid_argument("run_tradeoff: first period must be positive");
  std::vector<TradeoffRow> rows;
  for (Index channels : channel_counts)
    for (int m : class_counts) {
      if (m < 2) throw std::invalid_argument("run_tradeoff: class counts must be >= 2");
      SyntheticSpec s = spec;
      s.channels = channels;
      s.periods.clear();
      for (int k = 0; k < m; ++k) s.periods.push_back(first_period + k);
      const Scenario sc(s);
      const auto conf = classify_scenario(
          sc,
          {make_classifier({MethodKind::Rpt}, sc, fs, sc.noise_covariance()),
           make_classifier({MethodKind::Cca, cca_harmonics}, sc, fs, sc.noise_covariance())},
          per_class, opts);
      TradeoffRow row;
      row.channels = channels;
      row.classes = m;
      row.log2m = std::log2(static_cast<double>(m));
      row.trials = total_count(conf[0]);
      row.errors_rpt = row.trials - correct_count(conf[0]);
      row.errors_cca = row.trials - correct_count(conf[1]);
      row.p_e_rpt = row.errors_rpt == 0 ? floored_error_rate(0, row.trials) : p_e_average(conf[0]);
      row.p_e_cca = row.errors_cca == 0 ? floored_error_rate(0, row.trials) : p_e_average(conf[1]);
      row.exponent_rpt = error_exponent(row.p_e_rpt, static_cast<double>(s.length), s.snr());
      row.exponent_cca = error_exponent(row.p_e_cca, static_cast<double>(s.length), s.snr());
      rows.push_back(row);
    }
  return rows;
}

std::vector<MismatchRow> run_mismatch_experiment(const SyntheticSpec& spec, const std::vector<Index>& lengths,
                                                 long per_class, Index prestim_rows, const RunOptions& opts) {
  if (spec.channels < 2) throw std::invalid_argument("run_mismatch_experiment: needs at least two channels");
  std::vector<MismatchRow> rows;
  for (Index length : lengths) {
    const Scenario sc(with_length(spec, length));
    const auto estimated = estimate_spatial_covariance(sc.prestim(prestim_rows, 256));
    const auto identity = SpatialCovariance::identity(spec.channels);
    const auto conf = classify_scenario(sc,
                                        {make_classifier({MethodKind::Rpt}, sc, 1.0, sc.noise_covariance()),
                                         make_classifier({MethodKind::Rpt}, sc, 1.0, estimated),
                                         make_classifier({MethodKind::Rpt}, sc, 1.0, identity)},
                                        per_class, opts);
    MismatchRow row;
    row.length = length;
    row.trials = total_count(conf[0]);
    row.correct_known = correct_count(conf[0]);
    row.correct_estimated = correct_count(conf[1]);
    row.correct_identity = correct_count(conf[2]);
    row.p_value_known_vs_identity =
        two_proportion_p_value(row.correct_known, row.trials, row.correct_identity, row.trials);
    rows.push_back(row);
  }
  return rows;
}

std::string MethodSpec::label() const {
  switch (kind) {
    case MethodKind::Rpt:
      return "rpt";
    case MethodKind::Cca:
      return "cca" + std::to_string(harmonics);
    case MethodKind::Psda:
      return "psda";
  }
  return "unknown";
}

Classifier make_classifier(const MethodSpec& method, const Scenario& scenario, double fs,
                           const SpatialCovariance& assumed) {
  const auto& periods = scenario.spec().periods;
  switch (method.kind) {
    case MethodKind::Rpt: {
      auto det = std::make_shared<const MaryDetector>(scenario.dictionary(), periods, assumed);
      return [det](const Eigen::MatrixXd& y) { return mary_decide(y, *det); };
    }
    case MethodKind::Cca: {
      auto refs = std::make_shared<std::vector<CcaReference>>();
      for (int t : periods)
        refs->emplace_back(reference_matrix(fs / t, method.harmonics, fs, scenario.length()));
      return [refs](const Eigen::MatrixXd& y) { return cca_decide(y, *refs); };
    }
    case MethodKind::Psda: {
      std::vector<double> freqs;
      for (int t : periods) freqs.push_back(fs / t);
      return [freqs, fs](const Eigen::MatrixXd& y) { return psda_decide(y.col(0), freqs, fs); };
    }
  }
  throw std::invalid_argument("make_classifier: unknown method");
}

std::vector<ComparisonRow> run_method_comparison(const SyntheticSpec& spec, const std::vector<Index>& lengths,
                                                 const std::vector<MethodSpec>& methods, long per_class, double fs,
                                                 const RunOptions& opts) {
  if (methods.empty()) throw std::invalid_argument("run_method_comparison: no methods");
  if (!(fs > 0.0)) throw std::invalid_argument("run_method_comparison: fs must be positive");
  std::vector<ComparisonRow> rows;
  for (Index length : lengths) {
    const Scenario sc(with_length(spec, length));
    std::vector<Classifier> classifiers;
    for (const auto& m : methods) classifiers.push_back(make_classifier(m, sc, fs, sc.noise_covariance()));
    const auto conf = classify_scenario(sc, classifiers, per_class, opts);
    for (std::size_t k = 0; k < methods.size(); ++k) {
      ComparisonRow row;
      row.length = length;
      row.method = methods[k].label();
      row.correct = correct_count(conf[k]);
      row.trials = total_count(conf[k]);
      row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.trials);
      row.ci = wilson_interval(row.correct, row.trials);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace rpt
