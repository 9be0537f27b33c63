#include "rpt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "rpt/errors.hpp"
#include "rpt/quadrature.hpp"

namespace rpt {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("q_inverse: p must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double q_approx(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("q_approx: x must be > 0");
  return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * std::sqrt(1.0 + x * x));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double snr) { return 10.0 * std::log10(snr); }

double snr(const Eigen::VectorXd& x_s, const Eigen::MatrixXd& k_s, double sigma2, Index length) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("snr: sigma2 must be > 0");
  if (length <= 0) throw std::invalid_argument("snr: length must be > 0");
  if (k_s.cols() != x_s.size()) throw std::invalid_argument("snr: dimension mismatch");
  return (k_s * x_s).squaredNorm() / (sigma2 * static_cast<double>(length));
}

double ChiSquareParams::lambda2(Hypothesis h, Operator op) const {
  if (h == Hypothesis::H0) return op == Operator::A ? lambda0_a : lambda0_b;
  return op == Operator::A ? lambda1_a : lambda1_b;
}

bool ChiSquareParams::orthogonal(double tol) const {
  const double scale = std::max({1.0, lambda0_a, lambda0_b, lambda1_a, lambda1_b});
  return std::abs(lambda1_a) <= tol * scale && std::abs(lambda0_b) <= tol * scale;
}

ChiSquareParams chi_params_from_means(const Eigen::VectorXd& mean0, const Eigen::VectorXd& mean1,
                                      const ProjectionOperator& a, const ProjectionOperator& b) {
  if (a.length() != b.length() || mean0.size() != a.length() || mean1.size() != a.length())
    throw std::invalid_argument("chi_params: dimension mismatch");
  ChiSquareParams p;
  p.r_a = a.rank();
  p.r_b = b.rank();
  p.lambda0_a = a.quadratic(mean0);
  p.lambda0_b = b.quadratic(mean0);
  p.lambda1_a = a.quadratic(mean1);
  p.lambda1_b = b.quadratic(mean1);
  p.cross_cov_base = elementwise_product_sum(a, b);
  return p;
}

ChiSquareParams chi_params(const Eigen::VectorXd& x_s0, const Eigen::VectorXd& x_s1, const Eigen::MatrixXd& k_s0,
                           const Eigen::MatrixXd& k_s1, const ProjectionOperator& a, const ProjectionOperator& b) {
  if (k_s0.cols() != x_s0.size() || k_s1.cols() != x_s1.size() || k_s0.rows() != k_s1.rows())
    throw std::invalid_argument("chi_params: dimension mismatch");
  return chi_params_from_means(k_s0 * x_s0, k_s1 * x_s1, a, b);
}

double confluent_psi(double a, double b, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("confluent_psi: a must be > 0");
  if (!(x > 0.0)) throw std::invalid_argument("confluent_psi: x must be > 0");
  // With u = x t the defining integral becomes x^{1-b} int e^{-u} u^{a-1} (u+x)^{b-a-1} du.
  const double log_val = (1.0 - b) * std::log(x) - std::lgamma(a) + quad::log_power_exponential_integral(a, b - a - 1.0, x);
  const double v = std::exp(log_val);
  if (!std::isfinite(v)) throw NumericError("confluent_psi: value out of range");
  return v;
}

double chi_square_difference_pdf(double t, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("chi_square_difference_pdf: degrees of freedom must be > 0");
  const double beta = 0.5 * (a + b);
  const double norm = -beta * std::numbers::ln2 - std::lgamma(0.5 * a) - std::lgamma(0.5 * b);
  // For t >= 0: 2^{-beta}/Gamma(a/2) t^{beta-1} e^{-t/2} psi(b/2, beta; t); mirrored for t < 0.
  if (t >= 0.0) return std::exp(norm - 0.5 * t + quad::log_power_exponential_integral(0.5 * b, beta - 0.5 * b - 1.0, t));
  return std::exp(norm + 0.5 * t + quad::log_power_exponential_integral(0.5 * a, beta - 0.5 * a - 1.0, -t));
}

double cross_covariance(const ChiSquareParams& params, Hypothesis h) {
  const double lambda = h == Hypothesis::H0 ? params.lambda0_b : params.lambda1_a;
  return 4.0 * lambda + 2.0 * params.cross_cov_base;
}

double np_pd(double alpha, const ChiSquareParams& params) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("np_pd: alpha must lie in (0, 1)");
  const double rd = static_cast<double>(params.r_b) - static_cast<double>(params.r_a);
  const double mu0 = rd + params.lambda0_b - params.lambda0_a;
  const double mu1 = rd + params.lambda1_b - params.lambda1_a;
  const double base = 2.0 * static_cast<double>(params.r_a + params.r_b);
  const double var0 = base + 4.0 * (params.lambda0_a + params.lambda0_b) - 2.0 * cross_covariance(params, Hypothesis::H0);
  const double var1 = base + 4.0 * (params.lambda1_a + params.lambda1_b) - 2.0 * cross_covariance(params, Hypothesis::H1);
  if (!(var0 > 0.0 && var1 > 0.0)) throw NumericError("np_pd: non-positive variance");
  return q_function((q_inverse(alpha) * std::sqrt(var0) + mu0 - mu1) / std::sqrt(var1));
}

double pmb_pd_from_means(double alpha, const Eigen::VectorXd& mean0, const Eigen::VectorXd& mean1) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("pmb_pd: alpha must lie in (0, 1)");
  if (mean0.size() != mean1.size()) throw std::invalid_argument("pmb_pd: dimension mismatch");
  const double d2 = mean1.squaredNorm() + mean0.squaredNorm() - 2.0 * mean1.dot(mean0);
  return q_function(q_inverse(alpha) - std::sqrt(std::max(d2, 0.0)));
}

double pmb_pd(double alpha, const Eigen::VectorXd& x_s0, const Eigen::VectorXd& x_s1, const Eigen::MatrixXd& k_s0,
              const Eigen::MatrixXd& k_s1) {
  if (k_s0.cols() != x_s0.size() || k_s1.cols() != x_s1.size() || k_s0.rows() != k_s1.rows())
    throw std::invalid_argument("pmb_pd: dimension mismatch");
  return pmb_pd_from_means(alpha, k_s0 * x_s0, k_s1 * x_s1);
}

namespace {

double check_ls(double length, double snr, const char* who) {
  const double ls = length * snr;
  if (!(ls > 0.0)) throw std::invalid_argument(std::string(who) + ": L * SNR must be > 0");
  return ls;
}

}  // namespace

double gap(double length, double snr) {
  const double ls = check_ls(length, snr, "gap");
  const double e = std::exp(-0.5 * ls);
  return e * (std::numbers::sqrt2 - e) / (2.0 * std::sqrt(std::numbers::pi) * std::sqrt(ls));
}

double gap_log_rate(double length, double snr) {
  return std::abs(std::log(gap(length, snr))) / check_ls(length, snr, "gap_log_rate");
}

double p_e_binary(double length, double snr) {
  const double ls = check_ls(length, snr, "p_e_binary");
  return std::exp(-ls / 8.0) / (std::sqrt(2.0 * std::numbers::pi) * std::sqrt(ls / 4.0));
}

double p_e_average(const Eigen::MatrixXd& confusion) {
  if (confusion.rows() == 0 || confusion.rows() != confusion.cols())
    throw std::invalid_argument("p_e_average: confusion matrix must be square and non-empty");
  double total = 0.0;
  for (Index m = 0; m < confusion.rows(); ++m) {
    const double row = confusion.row(m).sum();
    if (!(row > 0.0)) throw std::invalid_argument("p_e_average: empty confusion row " + std::to_string(m));
    total += (row - confusion(m, m)) / row;
  }
  return total / static_cast<double>(confusion.rows());
}

double error_exponent(double p_e, double length, double snr) {
  if (!(p_e > 0.0 && p_e <= 1.0)) throw std::invalid_argument("error_exponent: P_e must lie in (0, 1]");
  return -std::log(p_e) / check_ls(length, snr, "error_exponent");
}

double floored_error_rate(long errors, long trials) {
  if (trials <= 0 || errors < 0 || errors > trials)
    throw std::invalid_argument("floored_error_rate: need 0 <= errors <= trials, trials > 0");
  if (errors == 0) return 0.5 / static_cast<double>(trials);
  return static_cast<double>(errors) / static_cast<double>(trials);
}

double itr(int classes, double accuracy, double seconds) {
  if (classes < 2) throw std::invalid_argument("itr: need at least two classes");
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) throw std::invalid_argument("itr: accuracy must lie in [0, 1]");
  if (!(seconds > 0.0)) throw std::invalid_argument("itr: T must be > 0");
  const double m = static_cast<double>(classes);
  double bits = std::log2(m);
  if (accuracy > 0.0) bits += accuracy * std::log2(accuracy);
  if (accuracy < 1.0) bits += (1.0 - accuracy) * std::log2((1.0 - accuracy) / (m - 1.0));
  return bits * 60.0 / seconds;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace rpt
