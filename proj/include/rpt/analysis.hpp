#pragma once

#include <vector>

#include <Eigen/Core>

#include "rpt/detector.hpp"
#include "rpt/projection.hpp"

namespace rpt {

/// Upper tail of the standard normal, Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);
/// Inverse of q_function on (0, 1).
double q_inverse(double p);
/// e^{-x^2/2} / (sqrt(2 pi) sqrt(1 + x^2)); only used by the closed-form
/// gap and error-probability expressions. Requires x > 0.
double q_approx(double x);

double db_to_linear(double db);
double linear_to_db(double snr);

/// ||K_S x_S||^2 / (sigma2 L).
double snr(const Eigen::VectorXd& x_s, const Eigen::MatrixXd& k_s, double sigma2, Index length);

enum class Operator { A, B };

/// Degrees of freedom and non-centrality parameters of the two quadratic
/// forms y^T A y and y^T B y under each hypothesis (unit noise variance).
struct ChiSquareParams {
  Index r_a = 0;
  Index r_b = 0;
  double lambda0_a = 0.0;
  double lambda0_b = 0.0;
  double lambda1_a = 0.0;
  double lambda1_b = 0.0;
  /// Sum of the entries of A .* B.
  double cross_cov_base = 0.0;

  double lambda2(Hypothesis h, Operator op) const;
  /// lambda_{1,A} = lambda_{0,B} = 0 up to tol (relative to the largest lambda).
  bool orthogonal(double tol = 1e-9) const;
};

/// Non-centralities from the signal means m0 = K_S0 x_S0 and m1 = K_S1 x_S1.
ChiSquareParams chi_params(const Eigen::VectorXd& x_s0, const Eigen::VectorXd& x_s1, const Eigen::MatrixXd& k_s0,
                           const Eigen::MatrixXd& k_s1, const ProjectionOperator& a, const ProjectionOperator& b);
ChiSquareParams chi_params_from_means(const Eigen::VectorXd& mean0, const Eigen::VectorXd& mean1,
                                      const ProjectionOperator& a, const ProjectionOperator& b);

/// Tricomi function psi(a, b; x) = Gamma(a)^{-1} int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt.
/// Throws std::invalid_argument unless a > 0 and x > 0, NumericError if the
/// quadrature fails.
double confluent_psi(double a, double b, double x);

/// Density of the difference of independent central chi-squares with a and b
/// degrees of freedom.
double chi_square_difference_pdf(double t, double a, double b);

/// Cross-covariance of y^T A y and y^T B y: 4 lambda_{0,B} + 2 sum c under H0,
/// 4 lambda_{1,A} + 2 sum c under H1.
double cross_covariance(const ChiSquareParams& params, Hypothesis h);

/// Neyman-Pearson detection probability of the Gaussian model at level alpha.
double np_pd(double alpha, const ChiSquareParams& params);

/// Q(Q^{-1}(alpha) - d) with d^2 the deflection ||K_S1 x_S1 - K_S0 x_S0||^2
/// expanded term by term.
double pmb_pd(double alpha, const Eigen::VectorXd& x_s0, const Eigen::VectorXd& x_s1, const Eigen::MatrixXd& k_s0,
              const Eigen::MatrixXd& k_s1);
double pmb_pd_from_means(double alpha, const Eigen::VectorXd& mean0, const Eigen::VectorXd& mean1);

/// Closed-form high-SNR gap between the bound and the composite test.
double gap(double length, double snr);
/// |log gap| / (L SNR).
double gap_log_rate(double length, double snr);

/// Closed-form high-SNR binary error probability.
double p_e_binary(double length, double snr);
/// Mean over classes of the misclassification fraction of each confusion row.
/// Throws std::invalid_argument on a non-square matrix or an empty row.
double p_e_average(const Eigen::MatrixXd& confusion);
/// -log(P_e) / (L SNR). Requires 0 < P_e <= 1.
double error_exponent(double p_e, double length, double snr);
/// errors / trials, or 1 / (2 trials) when no error was observed.
double floored_error_rate(long errors, long trials);

/// Information transfer rate in bits per minute.
double itr(int classes, double accuracy, double seconds);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rpt
