#include "rpt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "rpt/detector.hpp"
#include "rpt/errors.hpp"

namespace rpt {

ReferenceMatrix reference_matrix(double frequency, int harmonics, double fs, Index length) {
  if (!(frequency > 0.0) || harmonics < 1 || !(fs > 0.0) || length < 1)
    throw std::invalid_argument("reference_matrix: frequency, harmonics, fs and length must be positive");
  ReferenceMatrix ref{frequency, harmonics, fs, Eigen::MatrixXd(2 * harmonics, length)};
  const double w = 2.0 * std::numbers::pi * frequency;
  for (int h = 1; h <= harmonics; ++h)
    for (Index l = 1; l <= length; ++l) {
      const double arg = h * w * static_cast<double>(l) / fs;
      ref.q(2 * (h - 1), l - 1) = std::sin(arg);
      ref.q(2 * (h - 1) + 1, l - 1) = std::cos(arg);
    }
  return ref;
}

namespace {

// Returns X L^{-T} where L L^T = X^T X / n + ridge I, so the result has
// (near) identity sample covariance.
Eigen::MatrixXd whiten(const Eigen::MatrixXd& centred, const char* what) {
  const double n = static_cast<double>(centred.rows());
  Eigen::MatrixXd cov = centred.transpose() * centred / n;
  const double tr = cov.trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) throw NumericError(std::string("cca: zero-variance ") + what);
  cov.diagonal().array() += 1e-8 * tr / static_cast<double>(cov.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError(std::string("cca: cannot whiten ") + what);
  // Solve L Z^T = X^T for Z = X L^{-T}.
  return llt.matrixL().solve(centred.transpose()).transpose();
}

Eigen::MatrixXd centre(const Eigen::MatrixXd& x) { return x.rowwise() - x.colwise().mean(); }

}  // namespace

CcaReference::CcaReference(const ReferenceMatrix& ref)
    : centred_(centre(ref.q.transpose())), whitened_(whiten(centred_, "reference")) {}

double CcaReference::rho(const Eigen::MatrixXd& y) const {
  if (y.rows() != length()) throw std::invalid_argument("cca: trial length differs from the reference length");
  if (length() <= std::max(y.cols(), centred_.cols()))
    throw std::invalid_argument("cca: need L > max(N_c, 2 N_h)");
  const Eigen::MatrixXd wy = whiten(centre(y), "trial");
  const Eigen::MatrixXd cross = wy.transpose() * whitened_ / static_cast<double>(length());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  return std::clamp(svd.singularValues()(0), 0.0, 1.0);
}

double cca_rho(const Eigen::MatrixXd& y, const ReferenceMatrix& ref) { return CcaReference(ref).rho(y); }

Index cca_decide(const Eigen::MatrixXd& y, const std::vector<CcaReference>& refs) {
  Eigen::VectorXd scores(static_cast<Index>(refs.size()));
  for (std::size_t m = 0; m < refs.size(); ++m) scores(static_cast<Index>(m)) = refs[m].rho(y);
  return argmax_first(scores);
}

Index cca_decide(const Eigen::MatrixXd& y, const std::vector<ReferenceMatrix>& refs) {
  std::vector<CcaReference> prepared(refs.begin(), refs.end());
  return cca_decide(y, prepared);
}

Eigen::VectorXd psda_scores(const Eigen::VectorXd& y, const std::vector<double>& frequencies, double fs) {
  if (!(fs > 0.0)) throw std::invalid_argument("psda: fs must be positive");
  if (y.size() < 2) throw std::invalid_argument("psda: need at least two samples");
  const Index n = y.size();
  const Eigen::VectorXd x = y.array() - y.mean();
  const Index top = n / 2;
  auto power = [&](Index k) {
    std::complex<double> acc{0.0, 0.0};
    for (Index l = 0; l < n; ++l) acc += x(l) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * l % n) / static_cast<double>(n));
    return std::norm(acc) / static_cast<double>(n);
  };
  Eigen::VectorXd scores(static_cast<Index>(frequencies.size()));
  for (std::size_t m = 0; m < frequencies.size(); ++m) {
    if (!(frequencies[m] > 0.0)) throw std::invalid_argument("psda: goal frequencies must be positive");
    const auto centre_bin = static_cast<Index>(std::llround(frequencies[m] * static_cast<double>(n) / fs));
    double s = 0.0;
    for (Index k = std::max<Index>(0, centre_bin - 1); k <= std::min(top, centre_bin + 1); ++k) s += power(k);
    scores(static_cast<Index>(m)) = s;
  }
  return scores;
}

Index psda_decide(const Eigen::VectorXd& y, const std::vector<double>& frequencies, double fs) {
  return argmax_first(psda_scores(y, frequencies, fs));
}

}  // namespace rpt
