#pragma once

#include <functional>

namespace rpt::quad {

/// Adaptive 15-point Gauss-Kronrod on [a, b]; either bound may be infinite.
/// Throws NumericError when the result is not finite.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                 unsigned max_depth = 15);

/// log of I(a, c, x) = int_0^inf e^{-u} u^{a-1} (u + x)^c du for a > 0, x >= 0.
/// The domain is split around the peak of the integrand; the head [0, p] uses
/// u = p v^{1/k} to remove the endpoint singularity when a < 1.
double log_power_exponential_integral(double a, double c, double x);

}  // namespace rpt::quad
