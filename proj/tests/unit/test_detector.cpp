#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "rpt/detector.hpp"
#include "rpt/errors.hpp"

using namespace rpt;

namespace {

Eigen::MatrixXd gaussian(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

}  // namespace

TEST_SUITE("detector") {
  TEST_CASE("binary statistic") {
    const auto d = build_dictionary(18, 288);
    const auto det = make_binary_detector(d, 16, 18);
    CHECK(binary_statistic(Eigen::VectorXd::Zero(288), det) == 0.0);

    // Energy only in the non-shared part of S1: A-term vanishes.
    const auto [ao, bo] = orthogonal_operators(build_dictionary(18, 144), 16, 18);
    const auto d144 = build_dictionary(18, 144);
    const auto det144 = make_binary_detector(d144, 16, 18);
    Eigen::VectorXd y = bo.basis().col(0);
    CHECK(binary_statistic(y, det144) == doctest::Approx(y.squaredNorm()).epsilon(1e-10));

    CHECK_THROWS_AS(binary_statistic(Eigen::VectorXd::Zero(10), det), std::invalid_argument);
  }

  TEST_CASE("binary decision rule") {
    CHECK(binary_decide(5.0, 0.0) == Hypothesis::H1);
    CHECK(binary_decide(-3.0, 0.0) == Hypothesis::H0);
    CHECK(binary_decide(2.0, 2.0) == Hypothesis::H0);
  }

  TEST_CASE("GLRT reduction to the residual difference") {
    const auto d = build_dictionary(25, 100);
    const auto det = make_binary_detector(d, 25, 15);
    const auto k0 = restrict(d, support_set(d, 25));
    const auto k1 = restrict(d, support_set(d, 15));
    for (unsigned s = 0; s < 20; ++s) {
      const Eigen::VectorXd y = gaussian(100, 1, s);
      const double r0 = (y - k0 * restricted_ml_binary(y, k0)).squaredNorm();
      const double r1 = (y - k1 * restricted_ml_binary(y, k1)).squaredNorm();
      const double l = binary_statistic(y, det);
      CHECK(std::abs(l - (r0 - r1)) <= 1e-6 * std::max(1.0, std::abs(l)));
    }
  }

  TEST_CASE("orthogonal operators") {
    {
      const auto d = build_dictionary(10, 40);
      const auto [a, b] = orthogonal_operators(d, 10, 8);
      CHECK(a.rank() == euler_totient(5) + euler_totient(10));
      CHECK(b.rank() == euler_totient(4) + euler_totient(8));
      CHECK(a.matrix().trace() == doctest::Approx(8.0));
      CHECK(b.matrix().trace() == doctest::Approx(6.0));
    }
    {
      const auto d = build_dictionary(3, 6);
      const auto [a, b] = orthogonal_operators(d, 2, 3);
      CHECK((a.matrix() * b.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
    }
    {
      const auto d = build_dictionary(32, 288);
      const auto [a, b] = orthogonal_operators(d, 32, 18);
      // Totient sums over {4, 8, 16, 32} and {3, 6, 9, 18}.
      CHECK(a.rank() == 30);
      CHECK(b.rank() == 16);
      CHECK((a.matrix() * b.matrix()).cwiseAbs().maxCoeff() <= 1e-10);

      // Shared-divisor terms cancel: full and orthogonal statistics agree.
      const auto full = make_binary_detector(d, 32, 18);
      const BinaryDetector orth(a, b);
      for (unsigned s = 0; s < 25; ++s) {
        const Eigen::VectorXd y = gaussian(288, 1, 100 + s);
        const double lf = binary_statistic(y, full);
        const double lo = binary_statistic(y, orth);
        CHECK(lf == doctest::Approx(lo).epsilon(1e-9));
        for (double g : {-5.0, 0.0, 5.0}) CHECK(binary_decide(lf, g) == binary_decide(lo, g));
      }
    }
    CHECK_THROWS_AS(orthogonal_operators(build_dictionary(10, 41), 10, 8), std::invalid_argument);
    CHECK_THROWS_AS(orthogonal_operators(build_dictionary(10, 40), 8, 8), std::invalid_argument);
  }

  TEST_CASE("spatial covariance") {
    Eigen::MatrixXd s(2, 2);
    s << 2.0, 0.5, 0.5, 1.0;
    const SpatialCovariance c(s);
    CHECK((c.matrix() * c.inverse() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((c.cholesky() * c.cholesky().transpose() - s).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((c.whitener() * c.whitener().transpose() - c.inverse()).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(SpatialCovariance{bad}, std::invalid_argument);
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.1, 0.2, 1.0;
    CHECK_THROWS_AS(SpatialCovariance{asym}, std::invalid_argument);

    const auto dist = linear_electrode_distances(3);
    CHECK(dist(0, 2) == 2.0);
    const auto r = rho_distance_covariance(0.5, dist);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(0, 1) == doctest::Approx(0.5));
    CHECK(r(0, 2) == doctest::Approx(0.25));
  }

  TEST_CASE("covariance estimation") {
    const Index n = 100000;
    {
      const auto est = estimate_spatial_covariance({gaussian(n, 4, 7)});
      CHECK((est.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
    }
    {
      const Eigen::MatrixXd truth = rho_distance_covariance(0.5, linear_electrode_distances(4));
      const Eigen::MatrixXd chol = truth.llt().matrixL();
      const Eigen::MatrixXd x = gaussian(n, 4, 8) * chol.transpose();
      std::vector<Eigen::MatrixXd> segs;
      for (Index r = 0; r < n; r += 1000) segs.push_back(x.middleRows(r, 1000));
      const auto est = estimate_spatial_covariance(segs);
      CHECK((est.matrix() - truth).cwiseAbs().maxCoeff() < 0.05);
    }
    CHECK_THROWS_AS(estimate_spatial_covariance({Eigen::MatrixXd::Constant(50, 3, 2.0)}), EstimationError);
    CHECK_THROWS_AS(estimate_spatial_covariance({gaussian(3, 4, 1)}), EstimationError);
    Eigen::MatrixXd nan = gaussian(50, 2, 2);
    nan(3, 1) = std::nan("");
    CHECK_THROWS_AS(estimate_spatial_covariance({nan}), std::invalid_argument);

    // Near-singular input is conditioned to SPD.
    Eigen::MatrixXd dup = gaussian(200, 3, 9);
    dup.col(2) = dup.col(1);
    const auto est = estimate_spatial_covariance({dup});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(est.matrix());
    CHECK(eig.eigenvalues().minCoeff() > 1e-8 * est.matrix().trace() / 3.0);
  }

  TEST_CASE("M-ary detector") {
    const auto d = build_dictionary(9, 72);
    const std::vector<int> periods{9, 8, 7, 6};
    const MaryDetector det(d, periods, SpatialCovariance::identity(3));
    CHECK(mary_statistic(Eigen::MatrixXd::Zero(72, 3), det, 0) == 0.0);

    const Eigen::MatrixXd y = gaussian(72, 3, 11);
    for (Index m = 0; m < 4; ++m) {
      double expect = 0.0;
      for (Index c = 0; c < 3; ++c) expect += det.operators()[m].quadratic(y.col(c));
      CHECK(mary_statistic(y, det, m) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(mary_statistic(y, det, m) >= 0.0);
    }

    // Noiseless class-3 trial, using only the period-6 block so it is not
    // also inside the support of another class.
    const auto k6 = restrict(d, support_set(d, 6));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k6.cols(), 3);
    const auto block = d.range(6);
    const auto& idx = support_set(d, 6).indices;
    for (Index j = 0; j < k6.cols(); ++j)
      if (idx[j] >= block.begin) x.row(j) = gaussian(1, 3, 40 + static_cast<unsigned>(j));
    CHECK(mary_decide(k6 * x, det) == 3);

    // Correlated covariance: trace form.
    Eigen::MatrixXd sig = rho_distance_covariance(0.6, linear_electrode_distances(3));
    const MaryDetector cdet(d, periods, SpatialCovariance(sig));
    const Eigen::MatrixXd sinv = sig.inverse();
    for (Index m = 0; m < 4; ++m) {
      const double expect = (y * sinv * y.transpose() * cdet.operators()[m].matrix()).trace();
      CHECK(mary_statistic(y, cdet, m) == doctest::Approx(expect).epsilon(1e-10));
    }
    const auto dec = mary_decide(y, cdet);
    for (double c : {0.01, 3.0, 1e4}) CHECK(mary_decide(c * y, cdet) == dec);

    CHECK(argmax_first((Eigen::VectorXd(3) << 1.0, 4.0, 4.0).finished()) == 1);
    CHECK(argmax_first((Eigen::VectorXd(2) << 2.0, 2.0).finished()) == 0);
    CHECK_THROWS_AS(mary_decide(Eigen::MatrixXd::Zero(71, 3), det), std::invalid_argument);
    CHECK_THROWS_AS(MaryDetector(d, {8, 8}, SpatialCovariance::identity(1)), std::invalid_argument);
  }

  TEST_CASE("ML estimates do not depend on the covariance") {
    const auto d = build_dictionary(12, 48);
    const auto k = restrict(d, support_set(d, 12));
    const Eigen::MatrixXd y = gaussian(48, 3, 12);
    // restricted_ml_mary takes no covariance; whitening Y and un-whitening the
    // estimate returns the same coefficients.
    const Eigen::MatrixXd w = rho_distance_covariance(0.4, linear_electrode_distances(3)).llt().matrixL();
    const Eigen::MatrixXd a = restricted_ml_mary(y, k);
    const Eigen::MatrixXd b = restricted_ml_mary(y * w, k) * w.inverse();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("binary M-ary equivalence") {
    const auto d = build_dictionary(25, 100);
    const MaryDetector mdet(d, {25, 15}, SpatialCovariance::identity(1));
    const auto bdet = make_binary_detector(d, 25, 15);
    for (unsigned s = 0; s < 200; ++s) {
      const Eigen::MatrixXd y = gaussian(100, 1, 500 + s);
      const auto h = binary_decide(binary_statistic(y.col(0), bdet), 0.0);
      CHECK(mary_decide(y, mdet) == static_cast<Index>(h));
    }
  }
}
