#pragma once

#include <vector>

#include <Eigen/Core>

#include "rpt/ramanujan.hpp"

namespace rpt {

inline constexpr int kDefaultHarmonics = 2;

/// Sinusoidal reference for one goal frequency: rows sin(h w l / f_s) and
/// cos(h w l / f_s) for h = 1..N_h, columns l = 1..L, w = 2 pi f.
struct ReferenceMatrix {
  double frequency = 0.0;
  int harmonics = 1;
  double fs = 1.0;
  Eigen::MatrixXd q;  // 2 N_h x L
};

/// Throws std::invalid_argument on non-positive inputs.
ReferenceMatrix reference_matrix(double frequency, int harmonics, double fs, Index length);

/// Centred, whitened reference kept for repeated scoring.
class CcaReference {
 public:
  explicit CcaReference(const ReferenceMatrix& ref);
  Index length() const { return centred_.rows(); }
  /// Maximum canonical correlation with Y (L x N_c), in [0, 1].
  double rho(const Eigen::MatrixXd& y) const;

 private:
  Eigen::MatrixXd centred_;    // L x 2 N_h
  Eigen::MatrixXd whitened_;   // centred_ times the inverse transposed Cholesky factor
};

/// Auto-covariances get a ridge of 1e-8 trace/dim before Cholesky whitening.
/// Throws NumericError for zero-variance data and std::invalid_argument for
/// dimension mismatches or L <= max(N_c, 2 N_h).
double cca_rho(const Eigen::MatrixXd& y, const ReferenceMatrix& ref);

/// argmax_m rho_m, ties to the smallest index.
Index cca_decide(const Eigen::MatrixXd& y, const std::vector<CcaReference>& refs);
Index cca_decide(const Eigen::MatrixXd& y, const std::vector<ReferenceMatrix>& refs);

/// Periodogram power of the demeaned signal summed over the bin nearest each
/// goal frequency and its two neighbours.
Eigen::VectorXd psda_scores(const Eigen::VectorXd& y, const std::vector<double>& frequencies, double fs);
Index psda_decide(const Eigen::VectorXd& y, const std::vector<double>& frequencies, double fs);

}  // namespace rpt
