#include "rpt/ramanujan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rpt/errors.hpp"

namespace rpt {

std::int64_t euler_totient(std::int64_t p) {
  if (p < 1) throw std::invalid_argument("euler_totient: p must be >= 1, got " + std::to_string(p));
  std::int64_t result = p;
  std::int64_t n = p;
  for (std::int64_t f = 2; f * f <= n; ++f) {
    if (n % f != 0) continue;
    while (n % f == 0) n /= f;
    result -= result / f;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<int> divisors(int n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be >= 1");
  std::vector<int> out;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 1) throw std::invalid_argument("lcm: arguments must be positive");
  return std::lcm(a, b);
}

std::int64_t RamanujanSequence::operator()(std::int64_t n) const {
  const std::int64_t r = ((n % q) + q) % q;
  return values[static_cast<std::size_t>(r)];
}

RamanujanSequence ramanujan_sum(int q) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1, got " + std::to_string(q));
  RamanujanSequence seq;
  seq.q = q;
  seq.values.resize(static_cast<std::size_t>(q));
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (int n = 0; n < q; ++n) {
    long double re = 0.0L;
    long double im = 0.0L;
    for (int k = 1; k <= q; ++k) {
      if (std::gcd(k, q) != 1) continue;
      // Reduce k*n mod q first so the angle stays in [0, 2 pi).
      const long double angle = two_pi * static_cast<long double>((static_cast<std::int64_t>(k) * n) % q) / q;
      re += std::cos(angle);
      im += std::sin(angle);
    }
    const long double rounded = std::round(re);
    if (std::fabs(im) > 1e-9L || std::fabs(re - rounded) > 1e-9L)
      throw NumericError("ramanujan_sum: non-integer residue for q=" + std::to_string(q));
    seq.values[static_cast<std::size_t>(n)] = static_cast<std::int64_t>(rounded);
  }
  return seq;
}

PeriodicSubmatrix build_submatrix(int q, int length) {
  if (q < 1) throw std::invalid_argument("build_submatrix: q must be >= 1");
  if (length < q)
    throw std::invalid_argument("build_submatrix: period " + std::to_string(q) +
                                " exceeds window length " + std::to_string(length));
  const auto c = ramanujan_sum(q);
  const auto width = static_cast<Index>(euler_totient(q));
  PeriodicSubmatrix sub;
  sub.q = q;
  sub.length = length;
  sub.columns.resize(length, width);
  for (Index j = 0; j < width; ++j)
    for (Index i = 0; i < length; ++i) sub.columns(i, j) = c(i - j);
  return sub;
}

DictionaryMatrix::DictionaryMatrix(int max_period, int length)
    : max_period_(max_period), length_(length) {
  if (max_period < 1) throw std::invalid_argument("build_dictionary: P_max must be >= 1");
  if (length < max_period)
    throw std::invalid_argument("build_dictionary: P_max " + std::to_string(max_period) +
                                " exceeds window length " + std::to_string(length));
  Index total = 0;
  ranges_.reserve(static_cast<std::size_t>(max_period));
  for (int p = 1; p <= max_period; ++p) {
    const auto w = static_cast<Index>(euler_totient(p));
    ranges_.push_back({total, w});
    total += w;
  }
  matrix_.resize(length, total);
  for (int p = 1; p <= max_period; ++p) {
    const auto sub = build_submatrix(p, length);
    matrix_.middleCols(range(p).begin, range(p).width) = sub.columns.cast<double>();
  }
}

ColumnRange DictionaryMatrix::range(int p) const {
  if (p < 1 || p > max_period_)
    throw std::invalid_argument("DictionaryMatrix::range: period " + std::to_string(p) +
                                " outside [1, " + std::to_string(max_period_) + "]");
  return ranges_[static_cast<std::size_t>(p - 1)];
}

DictionaryMatrix build_dictionary(int max_period, int length) {
  return DictionaryMatrix(max_period, length);
}

SupportSet support_set(const DictionaryMatrix& dict, int period) {
  if (period < 1 || period > dict.max_period())
    throw std::invalid_argument("support_set: period " + std::to_string(period) +
                                " outside [1, P_max=" + std::to_string(dict.max_period()) + "]");
  SupportSet s;
  s.period = period;
  s.divisors = divisors(period);
  for (int d : s.divisors) {
    const auto r = dict.range(d);
    for (Index c = r.begin; c < r.end(); ++c) s.indices.push_back(c);
  }
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

Eigen::MatrixXd restrict(const DictionaryMatrix& dict, std::span<const Index> indices) {
  Eigen::MatrixXd out(dict.length(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const Index c = indices[j];
    if (c < 0 || c >= dict.cols())
      throw std::invalid_argument("restrict: column index " + std::to_string(c) + " out of range");
    out.col(static_cast<Index>(j)) = dict.matrix().col(c);
  }
  return out;
}

Eigen::MatrixXd restrict(const DictionaryMatrix& dict, const SupportSet& support) {
  return restrict(dict, std::span<const Index>(support.indices));
}

std::vector<Index> difference_support(const SupportSet& a, const SupportSet& b) {
  std::vector<Index> out;
  std::set_difference(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
                      std::back_inserter(out));
  return out;
}

void write_dictionary(std::ostream& out, const DictionaryMatrix& dict) {
  out << dict.max_period() << ' ' << dict.length() << '\n';
  const auto& k = dict.matrix();
  for (Index i = 0; i < k.rows(); ++i) {
    for (Index j = 0; j < k.cols(); ++j) {
      if (j) out << ' ';
      out << static_cast<std::int64_t>(k(i, j));
    }
    out << '\n';
  }
}

}  // namespace rpt
