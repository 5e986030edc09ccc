#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "clustermc/panel.hpp"

namespace clustermc {

// One autoregressive factor per asset with GARCH variance, cross-sectional
// correlation through a lower-triangular generator with unit-norm rows, and a
// bounded sine map from factors to returns.
struct DgpParams {
  int n = 0;
  int periods = 250;
  Eigen::VectorXd mu;     // each in (0, 0.05)
  Eigen::MatrixXd phi;    // n x n, spectral radius < 1
  Eigen::VectorXd alpha;  // variance floor
  Eigen::VectorXd beta;   // variance persistence
  Eigen::VectorXd gamma;  // factor-squared feedback; beta + gamma < 1
  Eigen::MatrixXd p;      // n x n lower triangular, unit-norm rows
  double noise_amplitude = 0.0015;
  double return_scale = 0.02;
  int burn_in = 500;

  void validate() const;
};

// Uniform parameter draws constrained so every stationarity invariant holds
// by construction (no rejection loop needed). Deterministic per seed.
DgpParams generate_params(int n, std::uint64_t seed);

struct SimulatedWorld {
  FactorPanel factors;     // single factor, T x n
  ReturnPanel returns;     // T x n
  Eigen::MatrixXd sigma2;  // conditional variance path, T x n
};

// Iterate the factor recursion for burn_in + periods steps (burn-in
// discarded), drawing time-major so a longer run with the same seed extends
// the shorter one rather than rewriting it.
SimulatedWorld simulate(const DgpParams& params, std::uint64_t seed);

// One-step conditional expected returns by nested Monte Carlo over the next
// innovation, given the current factor and variance state.
Eigen::VectorXd oracle_expected_return(const DgpParams& params, const Eigen::VectorXd& f_now,
                                       const Eigen::VectorXd& sigma2_now, int draws = 4096,
                                       std::uint64_t seed = 0);

}  // namespace clustermc
