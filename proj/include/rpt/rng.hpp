#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace rpt {

using Rng = std::mt19937_64;

/// Stream tags; each random quantity in a run draws from its own stream.
enum class StreamTag : std::uint64_t {
  Signal = 1,
  Noise = 2,
  FixedSignal = 3,
  Prestim = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Engine seeded from (seed, tag, class, trial), so a trial's draws never
/// depend on which worker generates it or in which order.
Rng make_rng(std::uint64_t seed, StreamTag tag, std::uint64_t cls = 0, std::uint64_t trial = 0);

Eigen::MatrixXd standard_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace rpt
