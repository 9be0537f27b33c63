#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rpt/analysis.hpp"

namespace rpt {

inline constexpr double kSeriesTolerance = 1e-10;

/// Distribution of the test statistic under one hypothesis: either a Gaussian
/// model or the exact Poisson mixture of chi-square differences (orthogonal
/// supports only).
class StatisticDistribution {
 public:
  enum class Kind { Gaussian, ExactSeries };

  /// Throws NumericError when variance <= 0.
  static StatisticDistribution gaussian(double mean, double variance);
  /// Throws std::invalid_argument when params are not orthogonal. The pdf is
  /// tabulated at construction on panels of a quarter standard deviation
  /// (17 Chebyshev-Lobatto nodes each) so cdf and sf are cheap afterwards.
  static StatisticDistribution exact(const ChiSquareParams& params, Hypothesis h, double tol = kSeriesTolerance);

  Kind kind() const { return kind_; }
  /// Mean and variance; for the exact kind these are the exact moments.
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double stddev() const;
  const ChiSquareParams& params() const { return params_; }
  Hypothesis hypothesis() const { return hypothesis_; }

  double pdf(double t) const;
  double cdf(double t) const;
  /// P(stat > t).
  double sf(double t) const;
  /// Interval outside which the exact density is negligible.
  double lower_bound() const;
  double upper_bound() const;

 private:
  Kind kind_ = Kind::Gaussian;
  double mean_ = 0.0;
  double variance_ = 1.0;
  ChiSquareParams params_{};
  Hypothesis hypothesis_ = Hypothesis::H0;
  double tol_ = kSeriesTolerance;
  // Piecewise polynomial interpolant of the exact pdf, built once per distribution.
  struct Table;
  std::shared_ptr<const Table> table_;
};

struct DistributionPair {
  StatisticDistribution h0;
  StatisticDistribution h1;
};

double exact_pdf(double t, const ChiSquareParams& params, Hypothesis h, double tol = kSeriesTolerance);
double exact_cdf(double t, const ChiSquareParams& params, Hypothesis h, double tol = kSeriesTolerance);
/// CDF at ascending points, accumulated interval by interval.
std::vector<double> exact_cdf_sorted(std::span<const double> ascending, const ChiSquareParams& params,
                                     Hypothesis h, double tol = kSeriesTolerance);

DistributionPair exact_distributions(const ChiSquareParams& params, double tol = kSeriesTolerance);
/// Gaussian model for orthogonal supports.
DistributionPair gaussian_orthogonal(const ChiSquareParams& params);
/// Gaussian model for general supports. Throws NumericError on a non-positive variance.
DistributionPair gaussian_general(const ChiSquareParams& params);

struct DetectionProbabilities {
  double pd = 0.0;
  double pf = 0.0;
};

DetectionProbabilities pd_pf(double gamma, const DistributionPair& dists);

/// Threshold with P_F = alpha and the matching P_D.
double threshold_at_pf(const DistributionPair& dists, double alpha);
double pd_at_pf(const DistributionPair& dists, double alpha);

enum class RocSource { Exact, Gaussian, Empirical };

struct RocPoint {
  double gamma = 0.0;
  double pf = 0.0;
  double pd = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // ordered by decreasing gamma
  RocSource source = RocSource::Gaussian;
};

/// 100 quantiles of each hypothesis at (k + 0.5)/100 plus the midpoint of the
/// two means, ascending. Quantiles come from the moment-matched Gaussians.
std::vector<double> roc_gamma_grid(const DistributionPair& dists);

RocCurve analytic_roc(const DistributionPair& dists, const std::vector<double>& gammas);

/// Empirical ROC from statistic samples; H1 declared when stat > gamma.
RocCurve empirical_roc(std::span<const double> stats_h0, std::span<const double> stats_h1,
                       const std::vector<double>& gammas);

}  // namespace rpt
