#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rpt/detector.hpp"
#include "rpt/ramanujan.hpp"
#include "rpt/rng.hpp"

namespace rpt {

enum class SpatialKind { Identity, RhoDistance, Explicit };

/// Noise covariance across electrodes.
struct SpatialModel {
  SpatialKind kind = SpatialKind::Identity;
  double rho = 0.0;
  Eigen::MatrixXd distances;  // RhoDistance only; empty means unit-spaced linear array
  Eigen::MatrixXd matrix;     // Explicit only

  static SpatialModel identity();
  static SpatialModel rho_distance(double rho, Eigen::MatrixXd distances = {});
  static SpatialModel explicit_matrix(Eigen::MatrixXd sigma);

  /// Throws std::invalid_argument for a bad rho, a size mismatch or a non-SPD matrix.
  SpatialCovariance covariance(Index channels) const;
};

/// How the unknown signal coefficients are drawn. Fixed draws one
/// representation per class and reuses it for every trial (the analytic
/// distributions then apply exactly); PerTrial draws a fresh one per trial.
enum class RepresentationPolicy { Fixed, PerTrial };

struct SyntheticSpec {
  std::vector<int> periods;  // class periods T_m in samples
  Index length = 0;
  Index channels = 1;
  double snr_db = 0.0;
  SpatialModel spatial;
  std::uint64_t seed = 1;
  RepresentationPolicy representation = RepresentationPolicy::PerTrial;

  double snr() const;
  int max_period() const;
  /// Throws std::invalid_argument if the spec is inconsistent.
  void validate() const;
};

struct TrialBatch {
  std::vector<Eigen::MatrixXd> trials;
  std::vector<int> labels;
  SyntheticSpec spec;
};

/// Standard-normal coefficients on the support of T, rescaled so that
/// ||K_S x||^2 = L * target_snr (unit noise variance).
Eigen::VectorXd sample_representation(int period, const DictionaryMatrix& dict, double target_snr, Rng& rng);
/// One independently drawn and rescaled column per channel.
Eigen::MatrixXd sample_representation(int period, const DictionaryMatrix& dict, double target_snr, Index channels,
                                      Rng& rng);

/// Precomputed generator for one spec: dictionary, class supports, noise
/// factor and (for the Fixed policy) the class representations.
/// Immutable after construction and safe to share across threads.
class Scenario {
 public:
  explicit Scenario(SyntheticSpec spec);

  const SyntheticSpec& spec() const { return spec_; }
  const DictionaryMatrix& dictionary() const { return dict_; }
  Index classes() const { return static_cast<Index>(spec_.periods.size()); }
  Index length() const { return spec_.length; }
  const Eigen::MatrixXd& restricted(Index m) const { return restricted_[static_cast<std::size_t>(m)]; }
  const SpatialCovariance& noise_covariance() const { return sigma_; }

  /// Coefficients X_m, |S_m| x N_c.
  Eigen::MatrixXd representation(Index m, std::uint64_t trial) const;
  /// Noise-free signal K_S X_m, L x N_c.
  Eigen::MatrixXd signal(Index m, std::uint64_t trial) const;
  /// Rows i.i.d. N(0, Sigma_w).
  Eigen::MatrixXd noise(Index m, std::uint64_t trial) const;
  Eigen::MatrixXd trial(Index m, std::uint64_t trial) const;

  /// Noise-only segments drawn from their own stream.
  std::vector<Eigen::MatrixXd> prestim(Index rows, Index segment_rows) const;

  /// per_class trials of every class, class-major.
  TrialBatch batch(long per_class) const;

 private:
  SyntheticSpec spec_;
  DictionaryMatrix dict_;
  std::vector<Eigen::MatrixXd> restricted_;
  SpatialCovariance sigma_;
  std::vector<Eigen::MatrixXd> fixed_;
};

/// One trial of class m; builds a Scenario on every call, so prefer Scenario
/// for repeated draws.
Eigen::MatrixXd synthesize_trial(const SyntheticSpec& spec, Index m, Rng& rng);

}  // namespace rpt
