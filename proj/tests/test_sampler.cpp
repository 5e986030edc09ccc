#include "clustermc/sampler.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "clustermc/errors.hpp"
#include "clustermc/region.hpp"
#include "test_support.hpp"

using namespace clustermc;

TEST(Region, BudgetCompletionArithmetic) {
  const FeasibleRegion region = budget_region(3);
  Eigen::Vector2d partial(0.3, 0.5);
  const Eigen::VectorXd w = region.expand(partial);
  EXPECT_NEAR(w(2), 0.2, 1e-15);
  EXPECT_TRUE(region.is_feasible(w));
}

TEST(Region, CompletionViolatingBoxIsRejected) {
  const FeasibleRegion region = budget_region(3);
  Eigen::Vector2d partial(0.7, 0.6);
  const Eigen::VectorXd w = region.expand(partial);
  EXPECT_NEAR(w(2), -0.3, 1e-15);
  EXPECT_FALSE(region.in_box(w));
  EXPECT_FALSE(region.is_feasible(w));
}

TEST(Region, CompletionToleranceIsTight) {
  const FeasibleRegion region = budget_region(2);
  Eigen::Vector2d w(0.4, 0.6);
  EXPECT_TRUE(region.completion_holds(w));
  w(1) = 0.6 + 1e-9;
  EXPECT_FALSE(region.completion_holds(w));
}

TEST(Sampler, EveryReturnedVectorIsFeasible) {
  FeasibleRegion region = budget_region(4, 0.0, 0.8);
  region.inequalities.push_back([](const Eigen::VectorXd& w) { return 0.6 - w(0) - w(1); });
  const auto samples = sample_feasible(region, 2000, 99);
  ASSERT_EQ(samples.size(), 2000u);
  for (const auto& w : samples) {
    ASSERT_TRUE(region.is_feasible(w));
  }
}

TEST(Sampler, TwoAssetMeanIsCentered) {
  const FeasibleRegion region = budget_region(2);
  const auto samples = sample_feasible(region, 10000, 4);
  double mean = 0.0;
  for (const auto& w : samples) mean += w(0);
  mean /= static_cast<double>(samples.size());
  EXPECT_NEAR(mean, 0.5, 0.02);
}

TEST(Sampler, SeedDeterminism) {
  const FeasibleRegion region = budget_region(3);
  const auto a = sample_feasible(region, 500, 1234);
  const auto b = sample_feasible(region, 500, 1234);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i], b[i]);
  }
  const auto c = sample_feasible(region, 500, 1235);
  EXPECT_NE(a[0], c[0]);
}

TEST(Sampler, AcceptanceRateIsOneOnPlainBudgetRegion) {
  const FeasibleRegion region = budget_region(2);
  EXPECT_DOUBLE_EQ(acceptance_rate(region, 10000, 5), 1.0);
}

TEST(Sampler, AcceptanceRateHalvesWithHalfIntervalConstraint) {
  FeasibleRegion region = budget_region(2);
  region.inequalities.push_back([](const Eigen::VectorXd& w) { return w(0) - 0.5; });
  EXPECT_NEAR(acceptance_rate(region, 10000, 5), 0.5, 0.02);
}

TEST(Sampler, SimplexInsideUnitBallAcceptsEverything) {
  FeasibleRegion region = budget_region(3);
  region.inequalities.push_back(
      [](const Eigen::VectorXd& w) { return 1.0 - w.squaredNorm(); });
  const double rate = acceptance_rate(region, 10000, 5);
  EXPECT_GT(rate, 0.0);
  EXPECT_DOUBLE_EQ(rate, 1.0);
}

TEST(Sampler, InfeasibleRegionReported) {
  FeasibleRegion region = budget_region(2);
  region.inequalities.push_back([](const Eigen::VectorXd& w) { return w(0) - 2.0; });
  SamplerOptions options;
  options.acceptance_floor = 1e-3;
  options.floor_check_after = 20000;
  EXPECT_THROW(sample_feasible(region, 10, 7, options), InfeasibleRegion);
}

TEST(Sampler, SingletonRegionHandled) {
  // n = 1 with budget completion: the only candidate is w = (1).
  const FeasibleRegion region = budget_region(1, 0.0, 1.5);
  const auto samples = sample_feasible(region, 5, 3);
  ASSERT_EQ(samples.size(), 5u);
  for (const auto& w : samples) EXPECT_DOUBLE_EQ(w(0), 1.0);

  const FeasibleRegion empty = budget_region(1, 0.0, 0.9);
  EXPECT_THROW(sample_feasible(empty, 1, 3), InfeasibleRegion);
}

TEST(Sampler, CustomCompletionUsesBoxProposal) {
  // w_2 = w_1^2: a nonlinear completion rule exercises the box route.
  FeasibleRegion region;
  region.n = 2;
  region.lower = Eigen::Vector2d(0.0, 0.0);
  region.upper = Eigen::Vector2d(1.0, 1.0);
  region.completion = Completion::kCustom;
  region.custom_completion = [](const Eigen::VectorXd& partial) {
    return partial(0) * partial(0);
  };
  const auto samples = sample_feasible(region, 300, 21);
  for (const auto& w : samples) {
    ASSERT_NEAR(w(1), w(0) * w(0), 1e-12);
    ASSERT_TRUE(region.is_feasible(w));
  }
}

// Denseness: the minimum distance from the cumulative sample set to a fixed
// feasible target is non-increasing in m and drops below epsilon.
TEST(Sampler, DensenessAtFixedTarget) {
  const FeasibleRegion region = budget_region(2);
  Eigen::Vector2d target(0.3, 0.7);
  const auto samples = sample_feasible(region, 50000, 8);

  const std::vector<int> checkpoints = {1000, 5000, 20000, 50000};
  double previous = std::numeric_limits<double>::infinity();
  double current = std::numeric_limits<double>::infinity();
  std::size_t cursor = 0;
  for (int checkpoint : checkpoints) {
    for (; cursor < static_cast<std::size_t>(checkpoint); ++cursor) {
      current = std::min(current, (samples[cursor] - target).norm());
    }
    EXPECT_LE(current, previous);
    previous = current;
  }
  EXPECT_LT(current, 0.01);
}

// Chi-square goodness of fit over 10 equal cells of the n=2 feasible
// interval; 27.877 is the upper 0.1% quantile with 9 degrees of freedom.
TEST(Sampler, UniformityGoodnessOfFit) {
  const FeasibleRegion region = budget_region(2);
  const int m = 100000;
  const auto samples = sample_feasible(region, m, 12);
  std::vector<int> counts(10, 0);
  for (const auto& w : samples) {
    int cell = static_cast<int>(w(0) * 10.0);
    cell = std::clamp(cell, 0, 9);
    ++counts[static_cast<std::size_t>(cell)];
  }
  const double expected = m / 10.0;
  double stat = 0.0;
  for (int c : counts) {
    stat += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(stat, 27.877);
}
