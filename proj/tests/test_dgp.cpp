#include "clustermc/dgp.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "clustermc/errors.hpp"
#include "clustermc/rng.hpp"

using namespace clustermc;

TEST(DgpParams, ScalarCaseSatisfiesInvariants) {
  const DgpParams p = generate_params(1, 42);
  EXPECT_GT(p.mu(0), 0.0);
  EXPECT_LT(p.mu(0), 0.05);
  EXPECT_LT(p.beta(0) + p.gamma(0), 1.0);
  EXPECT_DOUBLE_EQ(p.p(0, 0), 1.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(DgpParams, CorrelationRowsUnitNorm) {
  const DgpParams p = generate_params(50, 7);
  for (int j = 0; j < 50; ++j) {
    EXPECT_NEAR(p.p.row(j).squaredNorm(), 1.0, 1e-12);
  }
}

TEST(DgpParams, SpectralRadiusBelowOne) {
  const DgpParams p = generate_params(20, 3);
  const Eigen::VectorXcd eigenvalues = Eigen::EigenSolver<Eigen::MatrixXd>(p.phi).eigenvalues();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    radius = std::max(radius, std::abs(eigenvalues(i)));
  }
  EXPECT_LT(radius, 1.0);
}

TEST(DgpParams, DeterministicPerSeed) {
  const DgpParams a = generate_params(10, 5);
  const DgpParams b = generate_params(10, 5);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.p, b.p);
  const DgpParams c = generate_params(10, 6);
  EXPECT_NE(a.mu, c.mu);
}

TEST(Simulate, IidGaussianLimit) {
  // phi = 0, beta = gamma = 0: f_t = mu + sqrt(alpha) * eps_t i.i.d.
  DgpParams p = generate_params(1, 11);
  p.phi.setZero();
  p.beta.setZero();
  p.gamma.setconstant(1e-12);  // keep beta + gamma < 1 with a harmless epsilon
  p.alpha.setConstant(0.01);
  p.periods = 20000;
  const SimulatedWorld world = simulate(p, 1);
  const double mean = world.factors.values[0].col(0).mean();
  const double se = std::sqrt(0.01 / p.periods);
  EXPECT_NEAR(mean, p.mu(0), 4.0 * se);
}

TEST(Simulate, ZeroNoiseReturnsAreBoundedSine) {
  DgpParams p = generate_params(3, 12);
  p.noise_amplitude = 0.0;
  p.periods = 200;
  const SimulatedWorld world = simulate(p, 2);
  for (int t = 0; t < p.periods; ++t) {
    for (int j = 0; j < 3; ++j) {
      const double expected = 0.02 * std::sin(world.factors.values[0](t, j));
      ASSERT_NEAR(world.returns.returns(t, j), expected, 1e-15);
      ASSERT_LE(std::abs(world.returns.returns(t, j)), 0.02);
    }
  }
}

TEST(Simulate, DuplicatedCorrelationRowDuplicatesInnovations) {
  DgpParams p = generate_params(2, 13);
  p.p << 1.0, 0.0, 1.0, 0.0;  // row 2 = (1, 0): eps_2 == eps_1
  p.mu.setConstant(0.01);
  p.phi.setZero();
  p.alpha.setConstant(1e-4);
  p.beta.setConstant(0.2);
  p.gamma.setConstant(0.2);
  p.periods = 100;
  const SimulatedWorld world = simulate(p, 3);
  // Identical parameters + identical innovations => identical factor paths.
  EXPECT_LT((world.factors.values[0].col(0) - world.factors.values[0].col(1))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(Simulate, DeterministicAndPrefixStable) {
  DgpParams p = generate_params(4, 14);
  p.periods = 50;
  const SimulatedWorld short_run = simulate(p, 9);
  p.periods = 120;
  const SimulatedWorld long_run = simulate(p, 9);
  EXPECT_EQ(short_run.returns.returns, long_run.returns.returns.topRows(50));
  EXPECT_EQ(short_run.factors.values[0], long_run.factors.values[0].topRows(50));
}

TEST(Simulate, LongRunVarianceMatchesStationaryLevel) {
  // Pure GARCH case (mu ~ 0, phi = 0): E[sigma^2] = alpha / (1 - beta - gamma).
  DgpParams p = generate_params(1, 15);
  p.mu.setConstant(1e-8);
  p.phi.setZero();
  p.alpha.setConstant(5e-5);
  p.beta.setConstant(0.3);
  p.gamma.setConstant(0.3);
  p.periods = 100000;
  const SimulatedWorld world = simulate(p, 4);
  const double stationary = 5e-5 / (1.0 - 0.6);
  const double observed = world.sigma2.col(0).mean();
  EXPECT_NEAR(observed, stationary, 0.05 * stationary);
}

TEST(Oracle, DegenerateNoiseGivesSineOfMean) {
  DgpParams p = generate_params(2, 16);
  p.phi.setZero();
  p.alpha.setConstant(1e-18);
  p.beta.setZero();
  p.gamma.setConstant(1e-18);
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd sigma2 = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd expected_return = oracle_expected_return(p, f, sigma2, 256, 1);
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(expected_return(j), 0.02 * std::sin(p.mu(j)), 1e-9);
  }
}

TEST(Oracle, SymmetricSetupHasZeroMean) {
  // mu ~ 0 and phi = 0: sin is odd and the innovations are symmetric.
  DgpParams p = generate_params(1, 17);
  p.mu.setConstant(1e-12);
  p.phi.setZero();
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd sigma2 = Eigen::VectorXd::Constant(1, 1e-4);
  const Eigen::VectorXd r = oracle_expected_return(p, f, sigma2, 200000, 2);
  EXPECT_NEAR(r(0), 0.0, 3.0 * 0.02 * 0.01 / std::sqrt(200000.0));
}

TEST(Oracle, MatchesAnalyticSineExpectation) {
  // f_next,j ~ N(m_j, s_j^2) with unit-norm correlation rows, and
  // E[sin(N(m, s^2))] = sin(m) exp(-s^2 / 2).
  const DgpParams p = generate_params(3, 18);
  Eigen::VectorXd f(3);
  f << 0.05, -0.1, 0.2;
  Eigen::VectorXd sigma2(3);
  sigma2 << 2e-4, 1e-4, 3e-4;
  const int draws = 400000;
  const Eigen::VectorXd r = oracle_expected_return(p, f, sigma2, draws, 3);

  const Eigen::ArrayXd s2 = p.alpha.array() + p.beta.array() * sigma2.array() +
                            p.gamma.array() * f.array().square();
  const Eigen::VectorXd mean = p.mu + p.phi * f;
  for (int j = 0; j < 3; ++j) {
    const double analytic = 0.02 * std::sin(mean(j)) * std::exp(-s2(j) / 2.0);
    const double se = 0.02 * std::sqrt(s2(j)) / std::sqrt(static_cast<double>(draws));
    EXPECT_NEAR(r(j), analytic, 4.0 * se + 1e-9);
  }
}

TEST(Oracle, MatchesHighPrecisionInnerSimulation) {
  const DgpParams p = generate_params(2, 19);
  Eigen::VectorXd f(2);
  f << 0.1, 0.05;
  Eigen::VectorXd sigma2(2);
  sigma2 << 1.5e-4, 2.5e-4;
  const Eigen::VectorXd fast = oracle_expected_return(p, f, sigma2, 4096, 4);

  // Brute-force inner Monte Carlo at much higher draw count.
  const int draws = 1000000;
  const Eigen::ArrayXd s2 = p.alpha.array() + p.beta.array() * sigma2.array() +
                            p.gamma.array() * f.array().square();
  const Eigen::ArrayXd scale = s2.sqrt();
  const Eigen::VectorXd mean = p.mu + p.phi * f;
  Rng rng(991);
  Eigen::VectorXd u(2);
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(2);
  for (int d = 0; d < draws; ++d) {
    u(0) = rng.gaussian();
    u(1) = rng.gaussian();
    acc += (mean.array() + scale * (p.p * u).array()).sin();
  }
  const Eigen::VectorXd reference = 0.02 * (acc / draws).matrix();
  for (int j = 0; j < 2; ++j) {
    const double se = 0.02 * scale(j) / std::sqrt(4096.0);
    EXPECT_NEAR(fast(j), reference(j), 3.0 * se + 1e-9);
  }
}

TEST(Simulate, PanelShapesAndLabels) {
  DgpParams p = generate_params(5, 20);
  p.periods = 30;
  const SimulatedWorld world = simulate(p, 5);
  EXPECT_EQ(world.returns.periods(), 30);
  EXPECT_EQ(world.returns.width(), 5);
  EXPECT_EQ(world.factors.factors(), 1);
  EXPECT_EQ(world.sigma2.rows(), 30);
  EXPECT_NO_THROW(world.returns.validate());
}
