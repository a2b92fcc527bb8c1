#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "npdg/error.hpp"
#include "npdg/metrics.hpp"
#include "npdg/riccati.hpp"
#include "npdg/simulation.hpp"
#include "oracles.hpp"

namespace npdg {
namespace {

using fixtures::scalar;

const double kAcNash = -2.0 / std::sqrt(3.0);
const double kAcPot = -std::sqrt(2.0);
const double kDeltaStar = 1.0 / std::sqrt(2.0) - 1.0 / std::sqrt(3.0);

TEST(MatrixExponential, SpecialCases) {
  EXPECT_LE((matrix_exponential(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << -2.0, 0.5, 3.0;
  const Matrix ed = matrix_exponential(d);
  for (Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(ed(k, k), std::exp(d(k, k)), 1e-13 * std::exp(d(k, k)));
  }

  Matrix nil(2, 2);
  nil << 0.0, 1.0, 0.0, 0.0;
  Matrix expected(2, 2);
  expected << 1.0, 1.0, 0.0, 1.0;
  EXPECT_LE((matrix_exponential(nil) - expected).cwiseAbs().maxCoeff(), 1e-15);

  Matrix rot(2, 2);
  rot << 0.0, -M_PI, M_PI, 0.0;
  EXPECT_LE((matrix_exponential(rot) + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(MatrixExponential, AgreesWithTaylorOnSmallMatrices) {
  oracle::TestRng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 6;
    const Matrix m = rng.matrix(n, n) * 0.8;
    EXPECT_LE((matrix_exponential(m) - oracle::taylor_expm(m)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(MatrixExponential, SemigroupProperty) {
  oracle::TestRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = rng.matrix(4, 4) * 3.0;
    const double s = rng.uniform(0.0, 2.0);
    const double t = rng.uniform(0.0, 2.0);
    const Matrix lhs = matrix_exponential(m * (s + t));
    const Matrix rhs = matrix_exponential(m * s) * matrix_exponential(m * t);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + lhs.cwiseAbs().maxCoeff()));
  }
  EXPECT_THROW(matrix_exponential(Matrix::Zero(2, 3)), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(matrix_exponential(bad), Error);
}

TEST(UniformGrid, Endpoints) {
  const auto grid = uniform_grid(0.0, 2.0, 201);
  ASSERT_EQ(grid.size(), 201u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 2.0);
  EXPECT_NEAR(grid[100], 1.0, 1e-15);
  EXPECT_THROW(uniform_grid(1.0, 1.0, 5), Error);
  EXPECT_THROW(uniform_grid(0.0, 1.0, 1), Error);
}

TEST(Simulate, ScalarDecay) {
  const Vector x0 = Vector::Ones(1);
  const Trajectory t = simulate_closed_loop(scalar(-1.0), x0, {0.0, 1.0});
  EXPECT_EQ(t.states[0](0), 1.0);
  EXPECT_NEAR(t.states[1](0), std::exp(-1.0), 1e-15);
  const Trajectory nash = simulate_closed_loop(scalar(kAcNash), x0, {1.0});
  EXPECT_NEAR(nash.states[0](0), 0.315151898672202390, 1e-14);
}

TEST(Simulate, GridAndShapeErrors) {
  const Vector x0 = Vector::Ones(2);
  for (const std::vector<double>& grid :
       {std::vector<double>{}, std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.5},
        std::vector<double>{0.0, std::nan("")}}) {
    try {
      simulate_closed_loop(Matrix::Identity(2, 2), x0, grid);
      FAIL() << "expected GridInvalid";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kGridInvalid);
    }
  }
  EXPECT_THROW(simulate_closed_loop(Matrix::Identity(3, 3), x0, {0.0}), Error);
}

TEST(Simulate, MatchesRk4Reference) {
  oracle::TestRng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + trial % 5;
    const Matrix ac = rng.hurwitz(n, 0.3);
    const Vector x0 = rng.matrix(n, 1).col(0);
    const auto grid = uniform_grid(0.0, 2.0, 21);
    const Trajectory exact = simulate_closed_loop(ac, x0, grid);
    const Trajectory fine = rk4_reference(ac, x0, grid, 200);
    const Trajectory coarse = rk4_reference(ac, x0, grid, 1);
    double fine_err = 0.0;
    double coarse_err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      fine_err = std::max(fine_err, (exact.states[k] - fine.states[k]).norm());
      coarse_err = std::max(coarse_err, (exact.states[k] - coarse.states[k]).norm());
    }
    EXPECT_LE(fine_err, 1e-10);
    EXPECT_LE(coarse_err, 1e-4);
  }
  EXPECT_THROW(rk4_reference(scalar(-1.0), Vector::Ones(1), {0.0, 1.0}, 0), Error);
}

TEST(TrajectoryError, ScalarPairAtOne) {
  const Vector x0 = Vector::Ones(1);
  const std::vector<double> grid{0.0, 1.0};
  const auto err = trajectory_error(simulate_closed_loop(scalar(kAcPot), x0, grid),
                                    simulate_closed_loop(scalar(kAcNash), x0, grid));
  EXPECT_EQ(err[0], 0.0);
  EXPECT_NEAR(err[1], 0.072035164237988179, 1e-14);
  EXPECT_THROW(trajectory_error(simulate_closed_loop(scalar(kAcPot), x0, grid),
                                simulate_closed_loop(scalar(kAcPot), x0, {0.0, 2.0})),
               Error);
}

TEST(CNpdgBound, ScalarPairAndZeros) {
  const Vector x0 = Vector::Ones(1);
  const Matrix bp = Matrix::Ones(1, 2);
  const double b1 = c_npdg_bound(1.0, x0, bp, 2, scalar(kAcNash), scalar(kAcPot), kDeltaStar);
  EXPECT_NEAR(b1, 1.509591016013986363, 1e-12);
  EXPECT_EQ(c_npdg_bound(0.0, x0, bp, 2, scalar(kAcNash), scalar(kAcPot), kDeltaStar), 0.0);
  EXPECT_EQ(c_npdg_bound(1.0, x0, bp, 2, scalar(kAcNash), scalar(kAcPot), 0.0), 0.0);
  EXPECT_EQ(c_npdg_bound(1.0, Vector::Zero(1), bp, 2, scalar(kAcNash), scalar(kAcPot), 1.0), 0.0);
  EXPECT_THROW(c_npdg_bound(-1.0, x0, bp, 2, scalar(kAcNash), scalar(kAcPot), 1.0), Error);
  EXPECT_THROW(c_npdg_bound(1.0, x0, bp, 2, scalar(kAcNash), scalar(kAcPot), -1.0), Error);
}

TEST(VerifyBound, ScalarPair) {
  const auto [game, pot] = fixtures::scalar_pair();
  const BoundReport r = verify_bound(game, pot, Vector::Ones(1), uniform_grid(0.0, 1.0, 101));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.delta_star_used, kDeltaStar, 1e-8);
  EXPECT_NEAR(r.error.back(), 0.0720352, 1e-7);
  EXPECT_NEAR(r.bound.back(), 1.509591, 1e-6);
  EXPECT_NEAR(r.margin.back(), 0.04772, 1e-5);
  EXPECT_EQ(r.margin.front(), 0.0);
  EXPECT_EQ(r.players, 2u);
  EXPECT_NEAR(r.deltaK_norm, 0.2595130, 1e-7);
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    EXPECT_LE(r.error[k], r.bound[k] + kBoundSlack);
  }
  // e^{-2t/sqrt3} - e^{-sqrt2 t} peaks at t = ln(sqrt2 sqrt3 / 2) / (sqrt2 - 2/sqrt3) = 0.781.
  EXPECT_EQ(r.argmax_error(), 78u);
  EXPECT_GE(r.max_margin(), r.margin.back());
}

TEST(VerifyBound, ExactGameHasZeroErrorAndBound) {
  const auto d = fixtures::decoupled_game(21, {2, 2});
  const BoundReport r = verify_bound(d.game, d.potential, Vector::Ones(4), uniform_grid(0.0, 2.0, 41));
  EXPECT_TRUE(r.holds);
  for (double e : r.error) EXPECT_LE(e, 1e-8);
  EXPECT_THROW(verify_bound(d.game, d.potential, Vector::Ones(3), uniform_grid(0.0, 2.0, 5)), Error);
  EXPECT_THROW(verify_bound(d.game, d.potential, Vector::Ones(4), {-1.0, 0.0}), Error);
}

TEST(Partition, Uniform) {
  const auto parts = uniform_partition(0.0, 4.0, 4);
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts.front().first, 0.0);
  EXPECT_EQ(parts.back().second, 4.0);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    EXPECT_EQ(parts[k].first, parts[k - 1].second);
  }
  EXPECT_THROW(uniform_partition(0.0, 4.0, 0), Error);
}

TEST(PiecewiseDeltaTest, ScalarPairValues) {
  const Vector x0 = Vector::Ones(1);
  const auto grid = uniform_grid(0.0, 4.0, 401);
  const Trajectory tp = simulate_closed_loop(scalar(kAcPot), x0, grid);
  const Trajectory tn = simulate_closed_loop(scalar(kAcNash), x0, grid);
  const PiecewiseDelta pw = piecewise_delta(tp, tn, kDeltaStar, uniform_partition(0.0, 4.0, 4));
  ASSERT_EQ(pw.deltas.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    // The slower Nash loop dominates; its norm peaks at the interval start.
    EXPECT_NEAR(pw.deltas[k], kDeltaStar * std::exp(kAcNash * static_cast<double>(k)), 1e-12);
  }
  EXPECT_NEAR(pw.deltas[1], 0.0408930111209, 1e-12);
  EXPECT_TRUE(pw.monotone_decreasing);
}

TEST(PiecewiseDeltaTest, Errors) {
  const Vector x0 = Vector::Ones(1);
  const auto grid = uniform_grid(0.0, 4.0, 41);
  const Trajectory t = simulate_closed_loop(scalar(-1.0), x0, grid);
  auto kind_of = [&](const std::vector<std::pair<double, double>>& parts) {
    try {
      piecewise_delta(t, t, 0.1, parts);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kInvalidArgument;
  };
  EXPECT_EQ(kind_of({}), ErrorKind::kPartitionInvalid);
  EXPECT_EQ(kind_of({{0.0, 3.0}}), ErrorKind::kPartitionInvalid);
  EXPECT_EQ(kind_of({{0.0, 2.0}, {2.5, 4.0}}), ErrorKind::kPartitionInvalid);
  EXPECT_EQ(kind_of({{0.0, 2.0}, {1.5, 4.0}}), ErrorKind::kPartitionInvalid);
  EXPECT_EQ(kind_of({{0.0, 2.0}, {2.0, 2.0}, {2.0, 4.0}}), ErrorKind::kPartitionInvalid);
  EXPECT_EQ(kind_of({{0.0, 2.01}, {2.01, 2.05}, {2.05, 4.0}}), ErrorKind::kPartitionInvalid);
  EXPECT_THROW(piecewise_delta(t, t, -1.0, uniform_partition(0.0, 4.0, 2)), Error);
  const Trajectory other = simulate_closed_loop(scalar(-1.0), x0, uniform_grid(0.0, 4.0, 21));
  EXPECT_THROW(piecewise_delta(t, other, 0.1, uniform_partition(0.0, 4.0, 2)), Error);
}

TEST(PiecewiseDeltaTest, GrowingTrajectoryIsNotMonotone) {
  const Vector x0 = Vector::Ones(1);
  const auto grid = uniform_grid(0.0, 2.0, 21);
  const Trajectory t = simulate_closed_loop(scalar(0.5), x0, grid);
  const PiecewiseDelta pw = piecewise_delta(t, t, 0.1, uniform_partition(0.0, 2.0, 2));
  EXPECT_FALSE(pw.monotone_decreasing);
  EXPECT_NEAR(pw.deltas[1], 0.1 * std::exp(1.0), 1e-12);
}

}  // namespace
}  // namespace npdg
