#pragma once

#include <vector>

#include <Eigen/Core>

#include "rpt/ramanujan.hpp"

namespace rpt {

/// Orthogonal projector onto the column space of a restricted dictionary
/// matrix K_S, i.e. K_S (K_S^T K_S)^{-1} K_S^T.
///
/// The projector is held through an orthonormal basis Q of the column space
/// (P = Q Q^T), obtained from a column-pivoted Householder QR of K_S. Quadratic
/// forms y^T P y are evaluated as ||Q^T y||^2 without forming P.
class ProjectionOperator {
 public:
  /// Throws SingularSupportError when K_S is rank deficient or empty.
  explicit ProjectionOperator(const Eigen::MatrixXd& restricted, std::vector<Index> support = {});

  Index length() const { return basis_.rows(); }
  Index rank() const { return basis_.cols(); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const std::vector<Index>& support() const { return support_; }

  /// Dense L x L projector.
  Eigen::MatrixXd matrix() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& y) const;

  /// y^T P y.
  double quadratic(const Eigen::VectorXd& y) const;

 private:
  Eigen::MatrixXd basis_;
  std::vector<Index> support_;
};

ProjectionOperator projection_operator(const Eigen::MatrixXd& restricted);
ProjectionOperator projection_operator(const DictionaryMatrix& dict, const SupportSet& support);
ProjectionOperator projection_operator(const DictionaryMatrix& dict, std::span<const Index> indices);

/// Sum of the entries of the element-wise product P_a .* P_b, which equals
/// trace(P_a P_b) = ||Q_a^T Q_b||_F^2 for symmetric projectors.
double elementwise_product_sum(const ProjectionOperator& a, const ProjectionOperator& b);

/// Least-squares coefficients argmin_x ||y - K_S x||^2 (column-wise for a matrix
/// right-hand side). Throws SingularSupportError when K_S is rank deficient.
Eigen::VectorXd restricted_ml_binary(const Eigen::VectorXd& y, const Eigen::MatrixXd& restricted);
Eigen::MatrixXd restricted_ml_mary(const Eigen::MatrixXd& y, const Eigen::MatrixXd& restricted);

}  // namespace rpt
