#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rpt/projection.hpp"
#include "rpt/ramanujan.hpp"

namespace rpt {

enum class Hypothesis { H0 = 0, H1 = 1 };

/// Cross-electrode noise covariance with its cached inverse and whitening
/// factor W (Sigma^{-1} = W W^T, so tr(Y Sigma^{-1} Y^T A) = ||Q^T Y W||_F^2).
class SpatialCovariance {
 public:
  /// Throws std::invalid_argument if sigma is not square, symmetric, finite and
  /// positive definite.
  explicit SpatialCovariance(Eigen::MatrixXd sigma);

  static SpatialCovariance identity(Index channels);

  Index channels() const { return sigma_.rows(); }
  const Eigen::MatrixXd& matrix() const { return sigma_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  const Eigen::MatrixXd& whitener() const { return whitener_; }
  /// Lower Cholesky factor C with Sigma = C C^T.
  const Eigen::MatrixXd& cholesky() const { return cholesky_; }

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd inverse_;
  Eigen::MatrixXd whitener_;
  Eigen::MatrixXd cholesky_;
};

/// Initial shrinkage weight applied after pooling.
inline constexpr double kCovarianceShrinkage = 1e-3;

/// Pooled sample covariance of pre-stimulus segments (rows = samples,
/// columns = electrodes). Each segment is mean-centred before pooling. The
/// result is shrunk toward (tr/N_c) I with weight 1e-3, and the weight is
/// doubled until the smallest eigenvalue exceeds 1e-8 tr/N_c.
///
/// Throws EstimationError for too few rows or zero variance and
/// std::invalid_argument for non-finite entries or inconsistent channel counts.
SpatialCovariance estimate_spatial_covariance(const std::vector<Eigen::MatrixXd>& prestim);

/// Rho-distance model Sigma_ij = rho^{d_ij}.
Eigen::MatrixXd rho_distance_covariance(double rho, const Eigen::MatrixXd& distances);
/// Unit-spaced linear electrode array, d_ij = |i - j|.
Eigen::MatrixXd linear_electrode_distances(Index channels);

struct BinaryDetector {
  ProjectionOperator a;  // support of H0
  ProjectionOperator b;  // support of H1
  double gamma = 0.0;

  BinaryDetector(ProjectionOperator a_op, ProjectionOperator b_op, double threshold = 0.0);
};

/// Detector with A and B built from the full divisor supports of T0 and T1.
BinaryDetector make_binary_detector(const DictionaryMatrix& dict, int t0, int t1, double gamma = 0.0);

/// y^T B y - y^T A y.
double binary_statistic(const Eigen::VectorXd& y, const BinaryDetector& det);

/// H1 iff stat > gamma; ties resolve to H0.
Hypothesis binary_decide(double stat, double gamma);

/// Projectors onto the difference supports S0\S1 and S1\S0. Requires
/// dict.length() == lcm(T0, T1) and T0 != T1 (std::invalid_argument otherwise).
std::pair<ProjectionOperator, ProjectionOperator> orthogonal_operators(const DictionaryMatrix& dict, int t0,
                                                                       int t1);

/// M-ary multi-electrode detector: argmax_m tr(Y Sigma^{-1} Y^T A_m).
class MaryDetector {
 public:
  MaryDetector(const DictionaryMatrix& dict, std::vector<int> class_periods, SpatialCovariance sigma);

  Index classes() const { return static_cast<Index>(operators_.size()); }
  Index length() const { return operators_.front().length(); }
  const std::vector<ProjectionOperator>& operators() const { return operators_; }
  const std::vector<int>& class_periods() const { return periods_; }
  const SpatialCovariance& covariance() const { return sigma_; }

 private:
  std::vector<ProjectionOperator> operators_;
  std::vector<int> periods_;
  SpatialCovariance sigma_;
};

double mary_statistic(const Eigen::MatrixXd& y, const MaryDetector& det, Index m);

/// All M statistics for one trial, computed from a single whitening of Y.
Eigen::VectorXd mary_statistics(const Eigen::MatrixXd& y, const MaryDetector& det);

/// argmax of the statistics; ties go to the smallest class index.
Index mary_decide(const Eigen::MatrixXd& y, const MaryDetector& det);

/// argmax with ties to the smallest index; shared by every M-ary decision rule.
Index argmax_first(const Eigen::VectorXd& scores);

}  // namespace rpt
