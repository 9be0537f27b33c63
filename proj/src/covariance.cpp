#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "rpt/detector.hpp"
#include "rpt/errors.hpp"

namespace rpt {

SpatialCovariance::SpatialCovariance(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
  if (sigma_.rows() == 0 || sigma_.rows() != sigma_.cols())
    throw std::invalid_argument("SpatialCovariance: matrix must be square and non-empty");
  if (!sigma_.allFinite()) throw std::invalid_argument("SpatialCovariance: non-finite entries");
  const double scale = sigma_.cwiseAbs().maxCoeff();
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("SpatialCovariance: matrix is not symmetric");
  sigma_ = 0.5 * (sigma_ + sigma_.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("SpatialCovariance: matrix is not positive definite");
  cholesky_ = llt.matrixL();
  const Index n = sigma_.rows();
  // W = C^{-T}: Sigma^{-1} = C^{-T} C^{-1} = W W^T.
  whitener_ = cholesky_.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
  inverse_ = whitener_ * whitener_.transpose();
  inverse_ = 0.5 * (inverse_ + inverse_.transpose());
}

SpatialCovariance SpatialCovariance::identity(Index channels) {
  return SpatialCovariance(Eigen::MatrixXd::Identity(channels, channels));
}

SpatialCovariance estimate_spatial_covariance(const std::vector<Eigen::MatrixXd>& prestim) {
  if (prestim.empty()) throw EstimationError("estimate_spatial_covariance: no pre-stimulus segments");
  const Index channels = prestim.front().cols();
  if (channels == 0) throw EstimationError("estimate_spatial_covariance: zero channels");

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(channels, channels);
  Index rows = 0;
  Index segments = 0;
  for (const auto& seg : prestim) {
    if (seg.cols() != channels)
      throw std::invalid_argument("estimate_spatial_covariance: inconsistent channel count");
    if (!seg.allFinite()) throw std::invalid_argument("estimate_spatial_covariance: non-finite entries");
    if (seg.rows() == 0) continue;
    const Eigen::MatrixXd centred = seg.rowwise() - seg.colwise().mean();
    scatter.noalias() += centred.transpose() * centred;
    rows += seg.rows();
    ++segments;
  }
  // One degree of freedom is spent on each segment mean.
  const Index dof = rows - segments;
  if (rows <= channels || dof < 1)
    throw EstimationError("estimate_spatial_covariance: need more than " + std::to_string(channels) +
                          " rows, got " + std::to_string(rows));

  Eigen::MatrixXd pooled = scatter / static_cast<double>(dof);
  pooled = 0.5 * (pooled + pooled.transpose());
  const double avg_var = pooled.trace() / static_cast<double>(channels);
  if (!(avg_var > 0.0)) throw EstimationError("estimate_spatial_covariance: zero variance");

  const Eigen::MatrixXd target = avg_var * Eigen::MatrixXd::Identity(channels, channels);
  for (double delta = kCovarianceShrinkage; delta <= 1.0; delta *= 2.0) {
    Eigen::MatrixXd shrunk = (1.0 - delta) * pooled + delta * target;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shrunk, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() > 1e-8 * avg_var) return SpatialCovariance(std::move(shrunk));
  }
  return SpatialCovariance(target);
}

Eigen::MatrixXd rho_distance_covariance(double rho, const Eigen::MatrixXd& distances) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho_distance_covariance: rho must lie in (0, 1)");
  if (distances.rows() != distances.cols())
    throw std::invalid_argument("rho_distance_covariance: distance matrix must be square");
  return distances.unaryExpr([rho](double d) { return std::pow(rho, d); });
}

Eigen::MatrixXd linear_electrode_distances(Index channels) {
  Eigen::MatrixXd d(channels, channels);
  for (Index i = 0; i < channels; ++i)
    for (Index j = 0; j < channels; ++j) d(i, j) = static_cast<double>(i > j ? i - j : j - i);
  return d;
}

}  // namespace rpt
