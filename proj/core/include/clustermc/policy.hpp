#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "clustermc/optimizer.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

struct StateBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dims() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& x) const;
  Eigen::VectorXd clip(const Eigen::VectorXd& x) const;
};

// Finite-horizon Markov decision process over compact boxes. The transition
// draws its own noise from the supplied Rng so common random numbers across
// candidate policies come from seeding alone.
struct Mdp {
  StateBox state_space;
  StateBox action_space;
  std::function<double(const Eigen::VectorXd&)> reward;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&, Rng&)> transition;
  std::function<Eigen::VectorXd(Rng&)> initial_state;
  double discount = 0.9;
  int horizon = 0;  // 0: truncate where discount^H < 1e-6

  int effective_horizon() const;
  void validate() const;
};

// Per-cell affine map from states to actions; actions are clipped into the
// action box after evaluation. Cells partition the state box; a state on a
// shared boundary belongs to the first cell that contains it.
struct PiecewisePolicy {
  std::vector<StateBox> cells;
  std::vector<Eigen::VectorXd> intercepts;  // q per cell
  std::vector<Eigen::MatrixXd> slopes;      // q x d per cell

  Eigen::VectorXd act(const Eigen::VectorXd& state, const StateBox& action_space) const;
};

// Mean discounted rollout return and its standard error. Rollout r draws from
// substream (seed, r), so two policies evaluated with the same seed see the
// same noise.
std::pair<double, double> evaluate_policy(const Mdp& mdp, const PiecewisePolicy& policy,
                                          int rollouts, std::uint64_t seed);

struct PolicySearchBounds {
  double intercept_bound = 1.0;  // intercepts searched in [-b, b]
  double slope_bound = 1.0;      // slope entries searched in [-b, b]
};

struct PolicySearchResult {
  PiecewisePolicy policy;
  double value = 0.0;
  double stderr_value = 0.0;
  std::int64_t evaluations = 0;
};

// Flatten all cell parameters into one vector, sample the parameter box
// uniformly, and run the cluster-refine optimizer with the Monte-Carlo value
// estimate (common random numbers) as the objective.
PolicySearchResult search_policy(const Mdp& mdp, const std::vector<StateBox>& cells,
                                 const PolicySearchBounds& bounds, int rollouts,
                                 const OptimizerConfig& config);

// Axis-aligned uniform grid over the state box, cells_per_dim per dimension.
std::vector<StateBox> uniform_grid_cells(const StateBox& state_space, int cells_per_dim);

}  // namespace clustermc
