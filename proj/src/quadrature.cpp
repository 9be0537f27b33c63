#include "rpt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rpt/errors.hpp"

namespace rpt::quad {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, unsigned max_depth) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &error);
  if (!std::isfinite(v)) throw NumericError("quadrature produced a non-finite value");
  return v;
}

double log_power_exponential_integral(double a, double c, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("log_power_exponential_integral: a must be > 0");
  if (!(x >= 0.0)) throw std::invalid_argument("log_power_exponential_integral: x must be >= 0");
  if (x == 0.0 && !(a + c > 0.0))
    throw NumericError("log_power_exponential_integral: integral diverges at x = 0");

  auto log_h = [a, c, x](double u) { return -u + (a - 1.0) * std::log(u) + c * std::log(u + x); };

  // Locate the peak of log h on a coarse grid; it lies below max(a - 1, a - 1 + c) + O(sqrt).
  const double reach = std::max({1.0, a - 1.0, a - 1.0 + c});
  const double hi = reach + 10.0 * std::sqrt(reach) + 10.0;
  double mode = hi / 128.0;
  for (int k = 1; k <= 128; ++k) {
    const double u = hi * k / 128.0;
    if (log_h(u) > log_h(mode)) mode = u;
  }
  const double shift = log_h(mode);
  const double width = std::sqrt(std::max(1.0, mode));
  const double p1 = std::max(0.5 * mode, mode - 8.0 * width);
  const double p2 = mode + 8.0 * width;

  // Power substitution u = p1 v^{1/k} on [0, p1] removes an integrable
  // singularity at u = 0 (exponent a - 1, or a - 1 + c when x is small).
  double kappa = std::min(1.0, a);
  if (c < 0.0 && x < p1 && a + c > 0.0) kappa = std::min(kappa, a + c);

  const double log_scale = std::log(p1 / kappa);
  auto head = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double log_v = std::log(v);
    const double u = p1 * std::exp(log_v / kappa);
    return std::exp(log_h(u) - shift + log_scale + (1.0 / kappa - 1.0) * log_v);
  };
  auto body = [&](double u) { return std::exp(log_h(u) - shift); };

  const double head_val = integrate(head, 0.0, 1.0, 1e-11);
  const double mid_val = integrate(body, p1, p2, 1e-11);
  const double tail_val = integrate(body, p2, std::numeric_limits<double>::infinity(), 1e-11);
  const double total = head_val + mid_val + tail_val;
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("log_power_exponential_integral: degenerate value for a=" + std::to_string(a) +
                       " c=" + std::to_string(c) + " x=" + std::to_string(x));
  return shift + std::log(total);
}

}  // namespace rpt::quad
