#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rpt/baselines.hpp"
#include "rpt/distributions.hpp"
#include "rpt/parallel.hpp"
#include "rpt/simulate.hpp"

namespace rpt {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion (95% by default).
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

/// One-sided pooled two-proportion z-test of p1 > p2; returns the p-value.
double two_proportion_p_value(long k1, long n1, long k2, long n2);

/// Per-trial decision rule; must be safe to call concurrently.
using Classifier = std::function<Index(const Eigen::MatrixXd&)>;

/// Scores per_class trials of every class with each classifier. Returns one
/// M x M confusion matrix (rows: true class) per classifier.
std::vector<Eigen::MatrixXd> classify_scenario(const Scenario& scenario, const std::vector<Classifier>& classifiers,
                                               long per_class, const RunOptions& opts = {});

/// Statistic y^T B y - y^T A y of single-channel trials; h0 holds class 0
/// trials, h1 class 1 trials.
struct BinaryStatistics {
  std::vector<double> h0;
  std::vector<double> h1;
};
BinaryStatistics binary_statistics(const Scenario& scenario, const BinaryDetector& det, long per_class,
                                   const RunOptions& opts = {});

/// Analytic parameters for a binary, single-channel, Fixed-policy scenario
/// with A, B on the full supports of the two class periods.
ChiSquareParams scenario_params(const Scenario& scenario);
/// The same signal means against the difference-support operators
/// (requires L = lcm of the two periods).
ChiSquareParams scenario_orthogonal_params(const Scenario& scenario);

/// Gaussian-model error rate (P_F + 1 - P_D) / 2 at gamma = 0, or NaN when
/// the scenario is not binary, single channel and Fixed policy.
double theory_error_rate(const Scenario& scenario);

struct RocExperiment {
  RocCurve empirical;
  std::vector<Interval> pf_ci;
  std::vector<Interval> pd_ci;
  RocCurve theory;  // Gaussian model for general supports
  ChiSquareParams params;
  BinaryStatistics stats;
};

/// Empty gammas selects roc_gamma_grid of the Gaussian theory.
RocExperiment run_roc(const SyntheticSpec& spec, long per_class, std::vector<double> gammas = {},
                      const RunOptions& opts = {});

struct AccuracyRow {
  Index length = 0;
  long correct = 0;
  long trials = 0;
  double accuracy = 0.0;
  Interval ci;
  double p_e = 0.0;
  double p_e_theory = 0.0;  // NaN unless binary, single channel and Fixed policy
};

std::vector<AccuracyRow> run_accuracy_vs_length(const SyntheticSpec& spec, const std::vector<Index>& lengths,
                                                long per_class, const RunOptions& opts = {});

struct GapRow {
  Index length = 0;
  double ls = 0.0;          // L * SNR
  double pd_emp = 0.0;      // empirical P_D at the empirical level-alpha threshold
  Interval pd_ci;
  double pd_theory = 0.0;   // np_pd
  double pmb = 0.0;
  double gap_emp = 0.0;     // pmb - pd_emp
  double gap_theory = 0.0;  // pmb - pd_theory
  double gap_closed = 0.0;  // closed-form high-SNR approximation
};

std::vector<GapRow> run_gap_experiment(const SyntheticSpec& spec, const std::vector<Index>& lengths, long per_class,
                                       double alpha, const RunOptions& opts = {});

struct TradeoffRow {
  Index channels = 1;
  int classes = 2;
  double log2m = 1.0;
  long trials = 0;
  long errors_rpt = 0;
  long errors_cca = 0;
  double p_e_rpt = 0.0;
  double p_e_cca = 0.0;
  double exponent_rpt = 0.0;
  double exponent_cca = 0.0;
};

/// Class periods first_period, first_period + 1, ... for each class count;
/// spec.periods is ignored. RPT uses the true spatial covariance.
std::vector<TradeoffRow> run_tradeoff(const SyntheticSpec& spec, int first_period, const std::vector<int>& class_counts,
                                      const std::vector<Index>& channel_counts, long per_class, int cca_harmonics,
                                      double fs, const RunOptions& opts = {});

struct MismatchRow {
  Index length = 0;
  long trials = 0;
  long correct_known = 0;
  long correct_estimated = 0;
  long correct_identity = 0;
  double p_value_known_vs_identity = 1.0;
};

/// The estimated covariance is pooled from prestim_rows noise-only rows in
/// segments of 256 rows.
std::vector<MismatchRow> run_mismatch_experiment(const SyntheticSpec& spec, const std::vector<Index>& lengths,
                                                 long per_class, Index prestim_rows, const RunOptions& opts = {});

enum class MethodKind { Rpt, Cca, Psda };

struct MethodSpec {
  MethodKind kind = MethodKind::Rpt;
  int harmonics = kDefaultHarmonics;  // CCA only
  std::string label() const;
};

struct ComparisonRow {
  Index length = 0;
  std::string method;
  long correct = 0;
  long trials = 0;
  double accuracy = 0.0;
  Interval ci;
};

/// Goal frequencies are fs / T_m. PSDA scores channel 0.
std::vector<ComparisonRow> run_method_comparison(const SyntheticSpec& spec, const std::vector<Index>& lengths,
                                                 const std::vector<MethodSpec>& methods, long per_class, double fs,
                                                 const RunOptions& opts = {});

/// Classifier for a method on a prepared scenario.
Classifier make_classifier(const MethodSpec& method, const Scenario& scenario, double fs,
                           const SpatialCovariance& assumed);

}  // namespace rpt
