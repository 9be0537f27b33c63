#include "rpt/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "rpt/errors.hpp"

namespace rpt {

namespace {

void require_orthogonal(const ChiSquareParams& p, const char* who) {
  if (!p.orthogonal()) throw std::invalid_argument(std::string(who) + ": parameters are not from orthogonal supports");
  if (p.r_a < 1 || p.r_b < 1) throw std::invalid_argument(std::string(who) + ": both ranks must be positive");
}

// Poisson(mu) mixture over i of term(i); stops once the accumulated weight
// reaches 1 - tol.
template <typename Term>
double poisson_mixture(double mu, double tol, Term term) {
  if (mu <= 0.0) return term(0);
  const double log_mu = std::log(mu);
  double total = 0.0;
  double mass = 0.0;
  const long cap = static_cast<long>(mu + 60.0 * std::sqrt(mu) + 200.0);
  for (long i = 0; i <= cap; ++i) {
    const double w = std::exp(-mu + static_cast<double>(i) * log_mu - std::lgamma(static_cast<double>(i) + 1.0));
    mass += w;
    if (w > 1e-3 * tol) total += w * term(i);
    if (mass >= 1.0 - tol && static_cast<double>(i) > mu) return total;
  }
  throw NumericError("exact_pdf: Poisson series did not reach the truncation tolerance");
}

}  // namespace

double exact_pdf(double t, const ChiSquareParams& params, Hypothesis h, double tol) {
  require_orthogonal(params, "exact_pdf");
  const double ra = static_cast<double>(params.r_a);
  const double rb = static_cast<double>(params.r_b);
  if (h == Hypothesis::H1)
    return poisson_mixture(0.5 * params.lambda1_b, tol,
                           [&](long i) { return chi_square_difference_pdf(t, rb + 2.0 * static_cast<double>(i), ra); });
  return poisson_mixture(0.5 * params.lambda0_a, tol,
                         [&](long j) { return chi_square_difference_pdf(t, rb, ra + 2.0 * static_cast<double>(j)); });
}

StatisticDistribution StatisticDistribution::gaussian(double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean))
    throw NumericError("gaussian statistic model: variance must be finite and > 0");
  StatisticDistribution d;
  d.kind_ = Kind::Gaussian;
  d.mean_ = mean;
  d.variance_ = variance;
  return d;
}

double StatisticDistribution::stddev() const { return std::sqrt(variance_); }

double StatisticDistribution::lower_bound() const { return mean_ - 12.0 * stddev() - 30.0; }
double StatisticDistribution::upper_bound() const { return mean_ + 12.0 * stddev() + 30.0; }

struct StatisticDistribution::Table {
  static constexpr int kOrder = 16;
  std::vector<double> edges;                              // panel boundaries, ascending
  std::vector<std::array<double, kOrder + 1>> values;     // pdf at the Lobatto nodes of each panel
  std::vector<double> cumulative;                         // mass left of each edge

  static double node(int j) { return std::cos(std::numbers::pi * j / kOrder); }

  double interpolate(std::size_t k, double t) const {
    const double mid = 0.5 * (edges[k] + edges[k + 1]);
    const double half = 0.5 * (edges[k + 1] - edges[k]);
    const double x = (t - mid) / half;
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= kOrder; ++j) {
      const double diff = x - node(j);
      if (diff == 0.0) return values[k][static_cast<std::size_t>(j)];
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == kOrder) w *= 0.5;
      num += w * values[k][static_cast<std::size_t>(j)] / diff;
      den += w / diff;
    }
    return num / den;
  }

  // Gauss-Legendre with 10 points is exact for the degree-16 interpolant.
  double panel_integral(std::size_t k, double a, double b) const {
    return boost::math::quadrature::gauss<double, 10>::integrate([&](double t) { return interpolate(k, t); }, a, b);
  }

  double cdf(double t) const {
    if (t <= edges.front()) return 0.0;
    if (t >= edges.back()) return cumulative.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), t) - edges.begin() - 1);
    return cumulative[k] + panel_integral(k, edges[k], t);
  }
};

StatisticDistribution StatisticDistribution::exact(const ChiSquareParams& params, Hypothesis h, double tol) {
  require_orthogonal(params, "exact distribution");
  if (!(tol > 0.0 && tol < 1e-2)) throw std::invalid_argument("exact distribution: tolerance must lie in (0, 1e-2)");
  StatisticDistribution d;
  d.kind_ = Kind::ExactSeries;
  d.params_ = params;
  d.hypothesis_ = h;
  d.tol_ = tol;
  const double rd = static_cast<double>(params.r_b - params.r_a);
  const double base = 2.0 * static_cast<double>(params.r_a + params.r_b);
  if (h == Hypothesis::H0) {
    d.mean_ = rd - params.lambda0_a;
    d.variance_ = base + 4.0 * params.lambda0_a;
  } else {
    d.mean_ = rd + params.lambda1_b;
    d.variance_ = base + 4.0 * params.lambda1_b;
  }

  auto table = std::make_shared<Table>();
  // Panel edges with a break at the kink t = 0.
  std::vector<double> cuts{d.lower_bound()};
  if (d.lower_bound() < 0.0 && d.upper_bound() > 0.0) cuts.push_back(0.0);
  cuts.push_back(d.upper_bound());
  const double width = 0.25 * d.stddev();
  table->edges.push_back(cuts.front());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const auto pieces = std::max<long>(1, static_cast<long>(std::ceil((cuts[c + 1] - cuts[c]) / width)));
    const double step = (cuts[c + 1] - cuts[c]) / static_cast<double>(pieces);
    for (long i = 1; i < pieces; ++i) table->edges.push_back(cuts[c] + step * static_cast<double>(i));
    table->edges.push_back(cuts[c + 1]);
  }
  const std::size_t panels = table->edges.size() - 1;
  table->values.resize(panels);
  table->cumulative.assign(panels + 1, 0.0);
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = 0.5 * (table->edges[k] + table->edges[k + 1]);
    const double half = 0.5 * (table->edges[k + 1] - table->edges[k]);
    for (int j = 0; j <= Table::kOrder; ++j)
      table->values[k][static_cast<std::size_t>(j)] = exact_pdf(mid + half * Table::node(j), params, h, tol);
    table->cumulative[k + 1] = table->cumulative[k] + table->panel_integral(k, table->edges[k], table->edges[k + 1]);
  }
  d.table_ = std::move(table);
  return d;
}

double StatisticDistribution::pdf(double t) const {
  if (kind_ == Kind::Gaussian) {
    const double z = (t - mean_) / stddev();
    return std::exp(-0.5 * z * z) / (stddev() * std::sqrt(2.0 * std::numbers::pi));
  }
  return exact_pdf(t, params_, hypothesis_, tol_);
}

double StatisticDistribution::cdf(double t) const {
  if (kind_ == Kind::Gaussian) return q_function((mean_ - t) / stddev());
  return std::clamp(table_->cdf(t), 0.0, 1.0);
}

double StatisticDistribution::sf(double t) const {
  if (kind_ == Kind::Gaussian) return q_function((t - mean_) / stddev());
  return std::clamp(table_->cumulative.back() - table_->cdf(t), 0.0, 1.0);
}

double exact_cdf(double t, const ChiSquareParams& params, Hypothesis h, double tol) {
  return StatisticDistribution::exact(params, h, tol).cdf(t);
}

std::vector<double> exact_cdf_sorted(std::span<const double> ascending, const ChiSquareParams& params, Hypothesis h,
                                     double tol) {
  if (!std::is_sorted(ascending.begin(), ascending.end()))
    throw std::invalid_argument("exact_cdf_sorted: points must be ascending");
  const auto dist = StatisticDistribution::exact(params, h, tol);
  std::vector<double> out;
  out.reserve(ascending.size());
  for (double t : ascending) out.push_back(dist.cdf(t));
  return out;
}

DistributionPair exact_distributions(const ChiSquareParams& params, double tol) {
  return {StatisticDistribution::exact(params, Hypothesis::H0, tol),
          StatisticDistribution::exact(params, Hypothesis::H1, tol)};
}

DistributionPair gaussian_orthogonal(const ChiSquareParams& p) {
  const double rd = static_cast<double>(p.r_b) - static_cast<double>(p.r_a);
  const double base = 2.0 * static_cast<double>(p.r_a + p.r_b);
  return {StatisticDistribution::gaussian(rd - p.lambda0_a, base + 4.0 * p.lambda0_a),
          StatisticDistribution::gaussian(rd + p.lambda1_b, base + 4.0 * p.lambda1_b)};
}

DistributionPair gaussian_general(const ChiSquareParams& p) {
  const double rd = static_cast<double>(p.r_b) - static_cast<double>(p.r_a);
  auto var = [&p](Hypothesis h) {
    const double vb = 2.0 * (static_cast<double>(p.r_b) + 2.0 * p.lambda2(h, Operator::B));
    const double va = 2.0 * (static_cast<double>(p.r_a) + 2.0 * p.lambda2(h, Operator::A));
    return vb + va - 2.0 * cross_covariance(p, h);
  };
  const double v0 = var(Hypothesis::H0);
  const double v1 = var(Hypothesis::H1);
  if (!(v0 > 0.0 && v1 > 0.0))
    throw NumericError("gaussian_general: non-positive variance (degenerate support geometry)");
  return {StatisticDistribution::gaussian(rd + p.lambda0_b - p.lambda0_a, v0),
          StatisticDistribution::gaussian(rd + p.lambda1_b - p.lambda1_a, v1)};
}

DetectionProbabilities pd_pf(double gamma, const DistributionPair& dists) {
  return {dists.h1.sf(gamma), dists.h0.sf(gamma)};
}

double threshold_at_pf(const DistributionPair& dists, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("threshold_at_pf: alpha must lie in (0, 1)");
  const auto& h0 = dists.h0;
  if (h0.kind() == StatisticDistribution::Kind::Gaussian) return h0.mean() + h0.stddev() * q_inverse(alpha);
  double lo = h0.lower_bound();
  double hi = h0.upper_bound();
  for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (h0.sf(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double pd_at_pf(const DistributionPair& dists, double alpha) { return dists.h1.sf(threshold_at_pf(dists, alpha)); }

std::vector<double> roc_gamma_grid(const DistributionPair& dists) {
  std::vector<double> grid;
  grid.reserve(201);
  for (const auto* d : {&dists.h0, &dists.h1})
    for (int k = 0; k < 100; ++k) {
      const double p = (static_cast<double>(k) + 0.5) / 100.0;
      grid.push_back(d->mean() + d->stddev() * q_inverse(1.0 - p));
    }
  grid.push_back(0.5 * (dists.h0.mean() + dists.h1.mean()));
  std::sort(grid.begin(), grid.end());
  return grid;
}

RocCurve analytic_roc(const DistributionPair& dists, const std::vector<double>& gammas) {
  std::vector<double> g(gammas);
  std::sort(g.begin(), g.end(), std::greater<>());
  RocCurve roc;
  roc.source = dists.h0.kind() == StatisticDistribution::Kind::ExactSeries ? RocSource::Exact : RocSource::Gaussian;
  roc.points.reserve(g.size());
  double pf_floor = 0.0;
  double pd_floor = 0.0;
  for (double gamma : g) {
    const auto r = pd_pf(gamma, dists);
    // Running maxima absorb quadrature noise in the far tails.
    pf_floor = std::max(pf_floor, r.pf);
    pd_floor = std::max(pd_floor, r.pd);
    roc.points.push_back({gamma, pf_floor, pd_floor});
  }
  return roc;
}

RocCurve empirical_roc(std::span<const double> stats_h0, std::span<const double> stats_h1,
                       const std::vector<double>& gammas) {
  if (stats_h0.empty() || stats_h1.empty()) throw std::invalid_argument("empirical_roc: empty sample");
  std::vector<double> s0(stats_h0.begin(), stats_h0.end());
  std::vector<double> s1(stats_h1.begin(), stats_h1.end());
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());
  auto above = [](const std::vector<double>& s, double gamma) {
    const auto n = s.end() - std::upper_bound(s.begin(), s.end(), gamma);
    return static_cast<double>(n) / static_cast<double>(s.size());
  };
  std::vector<double> g(gammas);
  std::sort(g.begin(), g.end(), std::greater<>());
  RocCurve roc;
  roc.source = RocSource::Empirical;
  for (double gamma : g) roc.points.push_back({gamma, above(s0, gamma), above(s1, gamma)});
  return roc;
}

}  // namespace rpt
