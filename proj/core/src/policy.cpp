#include "clustermc/policy.hpp"

#include <cmath>

#include "clustermc/errors.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

bool StateBox::contains(const Eigen::VectorXd& x) const {
  for (int j = 0; j < dims(); ++j) {
    if (x(j) < lower(j) || x(j) > upper(j)) return false;
  }
  return true;
}

Eigen::VectorXd StateBox::clip(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

int Mdp::effective_horizon() const {
  if (horizon > 0) return horizon;
  return static_cast<int>(std::ceil(std::log(1e-6) / std::log(discount)));
}

void Mdp::validate() const {
  if (!(discount > 0.0 && discount < 1.0)) {
    throw DimensionMismatch("discount must lie in (0, 1)");
  }
  if (!reward || !transition || !initial_state) {
    throw DimensionMismatch("mdp needs reward, transition, and initial-state functions");
  }
  if (state_space.dims() < 1 || action_space.dims() < 1) {
    throw DimensionMismatch("state and action spaces must have positive dimension");
  }
}

Eigen::VectorXd PiecewisePolicy::act(const Eigen::VectorXd& state,
                                     const StateBox& action_space) const {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].contains(state)) {
      return action_space.clip(intercepts[k] + slopes[k] * state);
    }
  }
  // Clipped states always land in some cell of a covering partition; guard
  // against user-supplied cells that do not cover.
  throw DimensionMismatch("state outside every policy cell");
}

std::pair<double, double> evaluate_policy(const Mdp& mdp, const PiecewisePolicy& policy,
                                          int rollouts, std::uint64_t seed) {
  mdp.validate();
  if (rollouts < 1) throw DimensionMismatch("rollout count must be >= 1");
  const int horizon = mdp.effective_horizon();

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < rollouts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd state = mdp.state_space.clip(mdp.initial_state(rng));
    double total = 0.0;
    double discount_t = 1.0;
    for (int t = 0; t < horizon; ++t) {
      total += discount_t * mdp.reward(state);
      const Eigen::VectorXd action = policy.act(state, mdp.action_space);
      state = mdp.state_space.clip(mdp.transition(state, action, rng));
      discount_t *= mdp.discount;
    }
    sum += total;
    sum_sq += total * total;
  }
  const double mean = sum / rollouts;
  double se = 0.0;
  if (rollouts > 1) {
    const double var = (sum_sq - rollouts * mean * mean) / (rollouts - 1);
    se = std::sqrt(std::max(var, 0.0) / rollouts);
  }
  return {mean, se};
}

namespace {

PiecewisePolicy unflatten(const Eigen::VectorXd& params, const std::vector<StateBox>& cells,
                          int state_dims, int action_dims) {
  PiecewisePolicy policy;
  policy.cells = cells;
  int cursor = 0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    policy.intercepts.push_back(params.segment(cursor, action_dims));
    cursor += action_dims;
    Eigen::MatrixXd slope(action_dims, state_dims);
    for (int r = 0; r < action_dims; ++r) {
      slope.row(r) = params.segment(cursor, state_dims).transpose();
      cursor += state_dims;
    }
    policy.slopes.push_back(std::move(slope));
  }
  return policy;
}

}  // namespace

PolicySearchResult search_policy(const Mdp& mdp, const std::vector<StateBox>& cells,
                                 const PolicySearchBounds& bounds, int rollouts,
                                 const OptimizerConfig& config) {
  mdp.validate();
  if (cells.empty()) throw DimensionMismatch("policy search needs at least one cell");
  const int d = mdp.state_space.dims();
  const int q = mdp.action_space.dims();
  const int per_cell = q + q * d;
  const int total = per_cell * static_cast<int>(cells.size());

  Eigen::VectorXd lower(total), upper(total);
  int cursor = 0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (int i = 0; i < q; ++i) {
      lower(cursor) = -bounds.intercept_bound;
      upper(cursor) = bounds.intercept_bound;
      ++cursor;
    }
    for (int i = 0; i < q * d; ++i) {
      lower(cursor) = -bounds.slope_bound;
      upper(cursor) = bounds.slope_bound;
      ++cursor;
    }
  }
  const FeasibleRegion region = box_region(lower, upper);

  const std::uint64_t rollout_seed = mix_seed(config.seed, 0xEC);
  const Objective objective = [&](const Eigen::VectorXd& params) {
    const PiecewisePolicy candidate = unflatten(params, cells, d, q);
    return evaluate_policy(mdp, candidate, rollouts, rollout_seed).first;
  };

  const OptimizationResult best = optimize(region, objective, config);

  PolicySearchResult result;
  result.policy = unflatten(best.best_weights, cells, d, q);
  const auto value = evaluate_policy(mdp, result.policy, rollouts, rollout_seed);
  result.value = value.first;
  result.stderr_value = value.second;
  result.evaluations = best.evaluations;
  return result;
}

std::vector<StateBox> uniform_grid_cells(const StateBox& state_space, int cells_per_dim) {
  if (cells_per_dim < 1) throw DimensionMismatch("cells_per_dim must be >= 1");
  const int d = state_space.dims();
  long total = 1;
  for (int j = 0; j < d; ++j) total *= cells_per_dim;

  std::vector<StateBox> cells;
  cells.reserve(static_cast<std::size_t>(total));
  std::vector<int> index(static_cast<std::size_t>(d), 0);
  while (true) {
    StateBox cell;
    cell.lower.resize(d);
    cell.upper.resize(d);
    for (int j = 0; j < d; ++j) {
      const double width = (state_space.upper(j) - state_space.lower(j)) / cells_per_dim;
      cell.lower(j) = state_space.lower(j) + index[static_cast<std::size_t>(j)] * width;
      cell.upper(j) = index[static_cast<std::size_t>(j)] + 1 == cells_per_dim
                          ? state_space.upper(j)
                          : cell.lower(j) + width;
    }
    cells.push_back(std::move(cell));

    int digit = d - 1;
    while (digit >= 0 && ++index[static_cast<std::size_t>(digit)] == cells_per_dim) {
      index[static_cast<std::size_t>(digit)] = 0;
      --digit;
    }
    if (digit < 0) break;
  }
  return cells;
}

}  // namespace clustermc
