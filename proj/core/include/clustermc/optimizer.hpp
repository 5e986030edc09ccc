#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "clustermc/region.hpp"
#include "clustermc/sampler.hpp"

namespace clustermc {

// How to repair a cluster center that is itself infeasible (the mean of
// feasible points need not satisfy a nonlinear inequality or a nonlinear
// completion rule).
enum class CenterRepair {
  kCompleteThenNearest,  // re-apply the completion rule, fall back to the nearest member
  kNearestMember,        // always substitute the feasible member nearest to the center
};

struct OptimizerConfig {
  int m = 100000;        // samples drawn at the first level
  int k = 0;             // clusters per level; 0 = floor(sqrt(survivors)) capped at 64
  int max_levels = 12;
  double diameter_tol = 1e-4;     // stop when the winning cluster's diameter is below this
  double improvement_tol = 1e-10; // stop when a level improves the best score by less
  std::uint64_t seed = 0;
  CenterRepair center_repair = CenterRepair::kCompleteThenNearest;
  int replenish_floor = 10;  // top the survivor set back up to k * this
  int kmeans_max_iter = 50;
  double kmeans_tol = 1e-10;
  SamplerOptions sampler;

  void validate() const;
};

struct LevelRecord {
  int level = 0;
  int survivors = 0;       // sample count clustered at this level
  int winner = 0;          // argmax cluster index (lowest index on ties)
  double center_score = 0; // objective at the winning cluster's (repaired) center
  double diameter = 0;     // winning cluster diameter in weight space
  double best_score = 0;   // best-so-far after this level
};

struct OptimizationResult {
  Eigen::VectorXd best_weights;
  double best_score = 0.0;
  std::vector<LevelRecord> trace;
  std::int64_t evaluations = 0;  // objective call count
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Derivative-free global maximization by iterated sample / cluster / evaluate
// centers / descend into the argmax cluster. Returns the best feasible point
// ever evaluated — cluster centers across levels plus the raw samples of the
// final cluster — never merely the last center. Deterministic per
// (region, objective, config).
OptimizationResult optimize(const FeasibleRegion& region, const Objective& objective,
                            const OptimizerConfig& config);

}  // namespace clustermc
