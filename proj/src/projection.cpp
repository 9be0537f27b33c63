#include "rpt/projection.hpp"

#include <string>

#include <Eigen/QR>

#include "rpt/errors.hpp"

namespace rpt {

namespace {

// Relative pivot threshold for declaring K_S rank deficient.
constexpr double kRankThreshold = 1e-10;

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::MatrixXd& k) {
  if (k.cols() == 0 || k.rows() == 0) throw SingularSupportError("empty restricted dictionary");
  if (k.cols() > k.rows())
    throw SingularSupportError("restricted dictionary has more columns (" + std::to_string(k.cols()) +
                               ") than rows (" + std::to_string(k.rows()) + ")");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(k.rows(), k.cols());
  qr.setThreshold(kRankThreshold);
  qr.compute(k);
  if (qr.rank() < k.cols())
    throw SingularSupportError("restricted dictionary is rank deficient: rank " +
                               std::to_string(qr.rank()) + " < " + std::to_string(k.cols()));
  return qr;
}

}  // namespace

ProjectionOperator::ProjectionOperator(const Eigen::MatrixXd& restricted, std::vector<Index> support)
    : support_(std::move(support)) {
  const auto qr = checked_qr(restricted);
  basis_ = qr.householderQ() * Eigen::MatrixXd::Identity(restricted.rows(), restricted.cols());
}

Eigen::MatrixXd ProjectionOperator::matrix() const {
  Eigen::MatrixXd p = basis_ * basis_.transpose();
  // Exact symmetry; the product is symmetric only up to rounding.
  return 0.5 * (p + p.transpose());
}

Eigen::VectorXd ProjectionOperator::apply(const Eigen::VectorXd& y) const {
  if (y.size() != length()) throw std::invalid_argument("ProjectionOperator::apply: dimension mismatch");
  return basis_ * (basis_.transpose() * y);
}

Eigen::MatrixXd ProjectionOperator::apply(const Eigen::MatrixXd& y) const {
  if (y.rows() != length()) throw std::invalid_argument("ProjectionOperator::apply: dimension mismatch");
  return basis_ * (basis_.transpose() * y);
}

double ProjectionOperator::quadratic(const Eigen::VectorXd& y) const {
  if (y.size() != length()) throw std::invalid_argument("ProjectionOperator::quadratic: dimension mismatch");
  return (basis_.transpose() * y).squaredNorm();
}

ProjectionOperator projection_operator(const Eigen::MatrixXd& restricted) {
  return ProjectionOperator(restricted);
}

ProjectionOperator projection_operator(const DictionaryMatrix& dict, const SupportSet& support) {
  return ProjectionOperator(restrict(dict, support), support.indices);
}

ProjectionOperator projection_operator(const DictionaryMatrix& dict, std::span<const Index> indices) {
  return ProjectionOperator(restrict(dict, indices), std::vector<Index>(indices.begin(), indices.end()));
}

double elementwise_product_sum(const ProjectionOperator& a, const ProjectionOperator& b) {
  if (a.length() != b.length()) throw std::invalid_argument("elementwise_product_sum: length mismatch");
  return (a.basis().transpose() * b.basis()).squaredNorm();
}

Eigen::VectorXd restricted_ml_binary(const Eigen::VectorXd& y, const Eigen::MatrixXd& restricted) {
  if (y.size() != restricted.rows()) throw std::invalid_argument("restricted_ml_binary: dimension mismatch");
  return checked_qr(restricted).solve(y);
}

Eigen::MatrixXd restricted_ml_mary(const Eigen::MatrixXd& y, const Eigen::MatrixXd& restricted) {
  if (y.rows() != restricted.rows()) throw std::invalid_argument("restricted_ml_mary: dimension mismatch");
  return checked_qr(restricted).solve(y);
}

}  // namespace rpt
