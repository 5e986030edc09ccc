#include "clustermc/dgp.hpp"

#include <cmath>
#include <string>

#include "clustermc/dates.hpp"
#include "clustermc/errors.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

void DgpParams::validate() const {
  if (n < 1) throw DimensionMismatch("asset count must be >= 1");
  if (periods < 1) throw DimensionMismatch("period count must be >= 1");
  if (mu.size() != n || alpha.size() != n || beta.size() != n || gamma.size() != n ||
      phi.rows() != n || phi.cols() != n || p.rows() != n || p.cols() != n) {
    throw DimensionMismatch("parameter shapes do not match asset count");
  }
  for (int j = 0; j < n; ++j) {
    if (!(mu(j) > 0.0 && mu(j) < 0.05)) {
      throw DimensionMismatch("mu outside (0, 0.05) at " + std::to_string(j));
    }
    if (!(alpha(j) > 0.0)) throw DimensionMismatch("alpha must be positive");
    if (!(beta(j) >= 0.0 && gamma(j) >= 0.0 && beta(j) + gamma(j) < 1.0)) {
      throw DimensionMismatch("variance recursion not stationary at " + std::to_string(j));
    }
    // Row-sum (Gershgorin) bound: nonnegative phi with row sums < 1 has
    // spectral radius < 1.
    double row_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (phi(j, i) < 0.0) throw DimensionMismatch("phi entries must be nonnegative");
      row_sum += phi(j, i);
    }
    if (!(row_sum < 1.0)) throw DimensionMismatch("phi row sum >= 1 at " + std::to_string(j));

    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i > j && p(j, i) != 0.0) {
        throw DimensionMismatch("correlation generator must be lower triangular");
      }
      norm2 += p(j, i) * p(j, i);
    }
    if (std::abs(norm2 - 1.0) > 1e-12) {
      throw DimensionMismatch("correlation generator row " + std::to_string(j) +
                              " is not unit norm");
    }
  }
}

DgpParams generate_params(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("asset count must be >= 1");
  Rng rng(mix_seed(seed, 0));
  DgpParams params;
  params.n = n;

  params.mu.resize(n);
  for (int j = 0; j < n; ++j) params.mu(j) = rng.uniform(0.005, 0.05);

  // Diagonal-dominant draw keeps every row sum below 0.8, which bounds the
  // spectral radius away from 1 without an eigenvalue check.
  params.phi = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) params.phi(j, j) = rng.uniform(0.1, 0.5);
  if (n > 1) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i != j) params.phi(j, i) = rng.uniform(0.0, 0.3 / static_cast<double>(n));
      }
    }
  }

  params.alpha.resize(n);
  params.beta.resize(n);
  params.gamma.resize(n);
  for (int j = 0; j < n; ++j) params.alpha(j) = rng.uniform(2e-5, 2e-4);
  for (int j = 0; j < n; ++j) params.gamma(j) = rng.uniform(0.05, 0.4);
  for (int j = 0; j < n; ++j) params.beta(j) = rng.uniform(0.1, 0.9 - params.gamma(j));

  params.p = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i <= j; ++i) {
        params.p(j, i) = rng.uniform(-1.0, 1.0);
        norm2 += params.p(j, i) * params.p(j, i);
      }
    } while (norm2 < 1e-6);
    params.p.row(j) /= std::sqrt(norm2);
    if (params.p(j, j) < 0.0) params.p.row(j) = -params.p.row(j);
  }

  params.validate();
  return params;
}

SimulatedWorld simulate(const DgpParams& params, std::uint64_t seed) {
  params.validate();
  const int n = params.n;
  const int t_total = params.burn_in + params.periods;

  Rng rng(mix_seed(seed, 0));
  Eigen::VectorXd f = params.mu;
  Eigen::VectorXd sigma2 =
      params.alpha.array() / (1.0 - params.beta.array() - params.gamma.array());

  SimulatedWorld world;
  world.factors.names = {"factor_1"};
  world.factors.values.emplace_back(params.periods, n);
  world.returns.returns.resize(params.periods, n);
  world.sigma2.resize(params.periods, n);

  Eigen::VectorXd u(n), pert(n);
  for (int t = 1; t <= t_total; ++t) {
    for (int j = 0; j < n; ++j) u(j) = rng.gaussian();
    for (int j = 0; j < n; ++j) {
      pert(j) = rng.uniform(-params.noise_amplitude, params.noise_amplitude);
    }
    const Eigen::VectorXd eps = params.p * u;
    sigma2 = params.alpha.array() + params.beta.array() * sigma2.array() +
             params.gamma.array() * f.array().square();
    f = params.mu + params.phi * f + (sigma2.array().sqrt() * eps.array()).matrix();
    if (t > params.burn_in) {
      const int row = t - params.burn_in - 1;
      world.factors.values[0].row(row) = f.transpose();
      world.sigma2.row(row) = sigma2.transpose();
      world.returns.returns.row(row) =
          (params.return_scale * f.array().sin() + pert.array()).transpose();
    }
  }

  world.returns.dates = sequential_dates(params.periods, "2000-01-02");
  world.returns.assets.reserve(static_cast<std::size_t>(n));
  char buf[16];
  for (int j = 0; j < n; ++j) {
    std::snprintf(buf, sizeof(buf), "A%04d", j);
    world.returns.assets.push_back(buf);
  }
  world.returns.validate();
  world.factors.validate_against(world.returns);
  return world;
}

Eigen::VectorXd oracle_expected_return(const DgpParams& params, const Eigen::VectorXd& f_now,
                                       const Eigen::VectorXd& sigma2_now, int draws,
                                       std::uint64_t seed) {
  params.validate();
  if (f_now.size() != params.n || sigma2_now.size() != params.n) {
    throw DimensionMismatch("state vectors do not match asset count");
  }
  if (draws < 1) throw DimensionMismatch("draw count must be >= 1");

  const Eigen::ArrayXd sigma2_next = params.alpha.array() +
                                     params.beta.array() * sigma2_now.array() +
                                     params.gamma.array() * f_now.array().square();
  const Eigen::VectorXd mean = params.mu + params.phi * f_now;
  const Eigen::ArrayXd scale = sigma2_next.sqrt();

  Rng rng(mix_seed(seed, 0));
  Eigen::VectorXd u(params.n);
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(params.n);
  for (int d = 0; d < draws; ++d) {
    for (int j = 0; j < params.n; ++j) u(j) = rng.gaussian();
    const Eigen::ArrayXd f_next = mean.array() + scale * (params.p * u).array();
    acc += f_next.sin();
  }
  // The uniform perturbation has mean zero and adds nothing here.
  return (params.return_scale * acc / static_cast<double>(draws)).matrix();
}

}  // namespace clustermc
