#include "rpt/detector.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace rpt {

BinaryDetector::BinaryDetector(ProjectionOperator a_op, ProjectionOperator b_op, double threshold)
    : a(std::move(a_op)), b(std::move(b_op)), gamma(threshold) {
  if (a.length() != b.length()) throw std::invalid_argument("BinaryDetector: operators differ in length");
}

BinaryDetector make_binary_detector(const DictionaryMatrix& dict, int t0, int t1, double gamma) {
  return BinaryDetector(projection_operator(dict, support_set(dict, t0)),
                        projection_operator(dict, support_set(dict, t1)), gamma);
}

double binary_statistic(const Eigen::VectorXd& y, const BinaryDetector& det) {
  if (y.size() != det.a.length()) throw std::invalid_argument("binary_statistic: dimension mismatch");
  return det.b.quadratic(y) - det.a.quadratic(y);
}

Hypothesis binary_decide(double stat, double gamma) { return stat > gamma ? Hypothesis::H1 : Hypothesis::H0; }

std::pair<ProjectionOperator, ProjectionOperator> orthogonal_operators(const DictionaryMatrix& dict, int t0,
                                                                       int t1) {
  if (t0 == t1) throw std::invalid_argument("orthogonal_operators: periods must differ");
  if (t0 < 1 || t1 < 1) throw std::invalid_argument("orthogonal_operators: periods must be positive");
  if (dict.length() != lcm(t0, t1))
    throw std::invalid_argument("orthogonal_operators: dictionary length " + std::to_string(dict.length()) +
                                " != lcm(" + std::to_string(t0) + ", " + std::to_string(t1) + ")");
  const auto s0 = support_set(dict, t0);
  const auto s1 = support_set(dict, t1);
  const auto d01 = difference_support(s0, s1);
  const auto d10 = difference_support(s1, s0);
  return {projection_operator(dict, std::span<const Index>(d01)),
          projection_operator(dict, std::span<const Index>(d10))};
}

MaryDetector::MaryDetector(const DictionaryMatrix& dict, std::vector<int> class_periods, SpatialCovariance sigma)
    : periods_(std::move(class_periods)), sigma_(std::move(sigma)) {
  if (periods_.size() < 2) throw std::invalid_argument("MaryDetector: need at least two classes");
  if (std::set<int>(periods_.begin(), periods_.end()).size() != periods_.size())
    throw std::invalid_argument("MaryDetector: class periods must be distinct");
  operators_.reserve(periods_.size());
  for (int t : periods_) operators_.push_back(projection_operator(dict, support_set(dict, t)));
}

namespace {

void check_trial(const Eigen::MatrixXd& y, const MaryDetector& det) {
  if (y.rows() != det.length() || y.cols() != det.covariance().channels())
    throw std::invalid_argument("MaryDetector: trial is " + std::to_string(y.rows()) + "x" +
                                std::to_string(y.cols()) + ", expected " + std::to_string(det.length()) + "x" +
                                std::to_string(det.covariance().channels()));
}

}  // namespace

double mary_statistic(const Eigen::MatrixXd& y, const MaryDetector& det, Index m) {
  check_trial(y, det);
  if (m < 0 || m >= det.classes()) throw std::invalid_argument("mary_statistic: class index out of range");
  const Eigen::MatrixXd white = y * det.covariance().whitener();
  return (det.operators()[static_cast<std::size_t>(m)].basis().transpose() * white).squaredNorm();
}

Eigen::VectorXd mary_statistics(const Eigen::MatrixXd& y, const MaryDetector& det) {
  check_trial(y, det);
  const Eigen::MatrixXd white = y * det.covariance().whitener();
  Eigen::VectorXd out(det.classes());
  for (Index m = 0; m < det.classes(); ++m)
    out(m) = (det.operators()[static_cast<std::size_t>(m)].basis().transpose() * white).squaredNorm();
  return out;
}

Index argmax_first(const Eigen::VectorXd& scores) {
  if (scores.size() == 0) throw std::invalid_argument("argmax_first: empty score vector");
  Index best = 0;
  for (Index m = 1; m < scores.size(); ++m)
    if (scores(m) > scores(best)) best = m;
  return best;
}

Index mary_decide(const Eigen::MatrixXd& y, const MaryDetector& det) { return argmax_first(mary_statistics(y, det)); }

}  // namespace rpt
