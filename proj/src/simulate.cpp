#include "rpt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpt/analysis.hpp"
#include "rpt/errors.hpp"

namespace rpt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_rng(std::uint64_t seed, StreamTag tag, std::uint64_t cls, std::uint64_t trial) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  h = splitmix64(h ^ cls);
  h = splitmix64(h ^ trial);
  return Rng(h);
}

Eigen::MatrixXd standard_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = n01(rng);
  return out;
}

SpatialModel SpatialModel::identity() { return {}; }

SpatialModel SpatialModel::rho_distance(double rho, Eigen::MatrixXd distances) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("SpatialModel: rho must lie in (0, 1)");
  SpatialModel m;
  m.kind = SpatialKind::RhoDistance;
  m.rho = rho;
  m.distances = std::move(distances);
  return m;
}

SpatialModel SpatialModel::explicit_matrix(Eigen::MatrixXd sigma) {
  SpatialModel m;
  m.kind = SpatialKind::Explicit;
  m.matrix = std::move(sigma);
  return m;
}

SpatialCovariance SpatialModel::covariance(Index channels) const {
  switch (kind) {
    case SpatialKind::Identity:
      return SpatialCovariance::identity(channels);
    case SpatialKind::RhoDistance: {
      const Eigen::MatrixXd d = distances.size() == 0 ? linear_electrode_distances(channels) : distances;
      if (d.rows() != channels) throw std::invalid_argument("SpatialModel: distance matrix size != channel count");
      return SpatialCovariance(rho_distance_covariance(rho, d));
    }
    case SpatialKind::Explicit:
      if (matrix.rows() != channels) throw std::invalid_argument("SpatialModel: covariance size != channel count");
      return SpatialCovariance(matrix);
  }
  throw std::invalid_argument("SpatialModel: unknown kind");
}

double SyntheticSpec::snr() const { return db_to_linear(snr_db); }

int SyntheticSpec::max_period() const {
  if (periods.empty()) throw std::invalid_argument("SyntheticSpec: no class periods");
  return *std::max_element(periods.begin(), periods.end());
}

void SyntheticSpec::validate() const {
  if (periods.empty()) throw std::invalid_argument("SyntheticSpec: no class periods");
  for (int t : periods)
    if (t < 1) throw std::invalid_argument("SyntheticSpec: periods must be positive");
  if (length < max_period())
    throw std::invalid_argument("SyntheticSpec: length " + std::to_string(length) + " is below the largest period " +
                                std::to_string(max_period()));
  if (channels < 1) throw std::invalid_argument("SyntheticSpec: need at least one channel");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SyntheticSpec: snr_db must be finite");
}

Eigen::VectorXd sample_representation(int period, const DictionaryMatrix& dict, double target_snr, Rng& rng) {
  return sample_representation(period, dict, target_snr, 1, rng).col(0);
}

Eigen::MatrixXd sample_representation(int period, const DictionaryMatrix& dict, double target_snr, Index channels,
                                      Rng& rng) {
  if (!(target_snr >= 0.0)) throw std::invalid_argument("sample_representation: target SNR must be >= 0");
  const auto support = support_set(dict, period);
  const Eigen::MatrixXd k_s = restrict(dict, support);
  const auto width = static_cast<Index>(support.indices.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(width, channels);
  if (target_snr == 0.0) return x;
  const double target_energy = static_cast<double>(dict.length()) * target_snr;
  for (Index c = 0; c < channels; ++c) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 100) throw NumericError("sample_representation: repeated zero-energy draws");
      Eigen::VectorXd col = standard_normal(rng, width, 1);
      const double energy = (k_s * col).squaredNorm();
      if (energy > 0.0) {
        x.col(c) = col * std::sqrt(target_energy / energy);
        break;
      }
    }
  }
  return x;
}

Scenario::Scenario(SyntheticSpec spec)
    : spec_((spec.validate(), std::move(spec))),
      dict_(spec_.max_period(), static_cast<int>(spec_.length)),
      sigma_(spec_.spatial.covariance(spec_.channels)) {
  restricted_.reserve(spec_.periods.size());
  for (int t : spec_.periods) restricted_.push_back(restrict(dict_, support_set(dict_, t)));
  if (spec_.representation == RepresentationPolicy::Fixed) {
    for (Index m = 0; m < classes(); ++m) {
      auto rng = make_rng(spec_.seed, StreamTag::FixedSignal, static_cast<std::uint64_t>(m));
      fixed_.push_back(sample_representation(spec_.periods[static_cast<std::size_t>(m)], dict_, spec_.snr(),
                                             spec_.channels, rng));
    }
  }
}

Eigen::MatrixXd Scenario::representation(Index m, std::uint64_t trial) const {
  if (m < 0 || m >= classes()) throw std::invalid_argument("Scenario: class index out of range");
  if (spec_.representation == RepresentationPolicy::Fixed) return fixed_[static_cast<std::size_t>(m)];
  auto rng = make_rng(spec_.seed, StreamTag::Signal, static_cast<std::uint64_t>(m), trial);
  return sample_representation(spec_.periods[static_cast<std::size_t>(m)], dict_, spec_.snr(), spec_.channels, rng);
}

Eigen::MatrixXd Scenario::signal(Index m, std::uint64_t trial) const {
  return restricted(m) * representation(m, trial);
}

Eigen::MatrixXd Scenario::noise(Index m, std::uint64_t trial) const {
  auto rng = make_rng(spec_.seed, StreamTag::Noise, static_cast<std::uint64_t>(m), trial);
  return standard_normal(rng, spec_.length, spec_.channels) * sigma_.cholesky().transpose();
}

Eigen::MatrixXd Scenario::trial(Index m, std::uint64_t trial) const { return signal(m, trial) + noise(m, trial); }

std::vector<Eigen::MatrixXd> Scenario::prestim(Index rows, Index segment_rows) const {
  if (rows < 1 || segment_rows < 2) throw std::invalid_argument("Scenario::prestim: need rows >= 1 and segments >= 2");
  std::vector<Eigen::MatrixXd> out;
  std::uint64_t k = 0;
  for (Index done = 0; done < rows; done += segment_rows, ++k) {
    auto rng = make_rng(spec_.seed, StreamTag::Prestim, 0, k);
    const Index n = std::min(segment_rows, rows - done);
    out.push_back(standard_normal(rng, n, spec_.channels) * sigma_.cholesky().transpose());
  }
  return out;
}

TrialBatch Scenario::batch(long per_class) const {
  if (per_class < 0) throw std::invalid_argument("Scenario::batch: negative trial count");
  TrialBatch b;
  b.spec = spec_;
  for (Index m = 0; m < classes(); ++m)
    for (long i = 0; i < per_class; ++i) {
      b.trials.push_back(trial(m, static_cast<std::uint64_t>(i)));
      b.labels.push_back(static_cast<int>(m));
    }
  return b;
}

Eigen::MatrixXd synthesize_trial(const SyntheticSpec& spec, Index m, Rng& rng) {
  const Scenario sc(spec);
  if (m < 0 || m >= sc.classes()) throw std::invalid_argument("synthesize_trial: class index out of range");
  const Eigen::MatrixXd x =
      spec.representation == RepresentationPolicy::Fixed
          ? sc.representation(m, 0)
          : sample_representation(spec.periods[static_cast<std::size_t>(m)], sc.dictionary(), spec.snr(),
                                  spec.channels, rng);
  return sc.restricted(m) * x + standard_normal(rng, spec.length, spec.channels) * sc.noise_covariance().cholesky().transpose();
}

}  // namespace rpt
