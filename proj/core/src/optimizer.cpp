#include "clustermc/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "clustermc/errors.hpp"
#include "clustermc/kmeans.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

namespace {

constexpr int kMaxAutoClusters = 64;

int clusters_for(const OptimizerConfig& config, int survivors) {
  int k = config.k > 0 ? config.k
                       : std::min(kMaxAutoClusters,
                                  static_cast<int>(std::floor(std::sqrt(survivors))));
  k = std::min(k, survivors);
  return std::max(k, 1);
}

// Centers of feasible members can still violate nonlinear constraints or a
// nonlinear completion rule. Re-complete, and if that is not enough take the
// member nearest to the center (feasible by construction).
Eigen::VectorXd repair_center(const FeasibleRegion& region, const OptimizerConfig& config,
                              const Eigen::RowVectorXd& center, const Eigen::MatrixXd& samples,
                              const std::vector<int>& members) {
  Eigen::VectorXd w = center.transpose();
  if (config.center_repair == CenterRepair::kCompleteThenNearest) {
    if (region.completion != Completion::kNone) {
      w(region.n - 1) = region.complete(w.head(region.n - 1));
    }
    if (region.is_feasible(w)) return w;
  }
  double best = std::numeric_limits<double>::infinity();
  int best_i = members.front();
  for (int i : members) {
    const double d2 = (samples.row(i) - center).squaredNorm();
    if (d2 < best) {
      best = d2;
      best_i = i;
    }
  }
  return samples.row(best_i).transpose();
}

// Top the survivor set back up by drawing inside the winning cluster's
// axis-aligned bounding box (free coordinates), completing, and rejecting
// against the full region. Bounded attempts: a thin slice just stays small.
void replenish(const FeasibleRegion& region, Eigen::MatrixXd& samples, int target, Rng& rng) {
  const int have = static_cast<int>(samples.rows());
  if (have >= target || have == 0) return;
  const int free = region.free_dims();

  Eigen::VectorXd lo = samples.colwise().minCoeff().transpose();
  Eigen::VectorXd hi = samples.colwise().maxCoeff().transpose();
  for (int j = 0; j < free; ++j) {
    lo(j) = std::max(lo(j), region.lower(j));
    hi(j) = std::min(hi(j), region.upper(j));
    if (!(hi(j) > lo(j))) {
      const double pad = 1e-12;
      lo(j) -= pad;
      hi(j) += pad;
    }
  }

  const int needed = target - have;
  std::int64_t attempts = 0;
  const std::int64_t max_attempts = static_cast<std::int64_t>(needed) * 1000;
  Eigen::MatrixXd extra(needed, region.n);
  int got = 0;
  Eigen::VectorXd w(region.n);
  while (got < needed && attempts < max_attempts) {
    ++attempts;
    for (int j = 0; j < free; ++j) w(j) = rng.uniform(lo(j), hi(j));
    if (region.completion != Completion::kNone) {
      w(region.n - 1) = region.complete(w.head(region.n - 1));
    }
    if (region.in_box(w) && region.satisfies_inequalities(w)) {
      extra.row(got++) = w.transpose();
    }
  }
  if (got == 0) return;
  const int old_rows = static_cast<int>(samples.rows());
  samples.conservativeResize(old_rows + got, Eigen::NoChange);
  samples.bottomRows(got) = extra.topRows(got);
}

}  // namespace

void OptimizerConfig::validate() const {
  if (m < 1) throw DimensionMismatch("optimizer m must be >= 1");
  if (k < 0) throw DimensionMismatch("optimizer k must be >= 0");
  if (k > m) throw DimensionMismatch("optimizer k must not exceed m");
  if (max_levels < 1) throw DimensionMismatch("max_levels must be >= 1");
  if (diameter_tol < 0 || improvement_tol < 0) {
    throw DimensionMismatch("tolerances must be nonnegative");
  }
  if (replenish_floor < 1) throw DimensionMismatch("replenish_floor must be >= 1");
}

OptimizationResult optimize(const FeasibleRegion& region, const Objective& objective,
                            const OptimizerConfig& config) {
  config.validate();
  region.validate();

  OptimizationResult result;
  result.best_score = -std::numeric_limits<double>::infinity();

  auto evaluate_at = [&](const Eigen::VectorXd& w) {
    ++result.evaluations;
    double score;
    try {
      score = objective(w);
    } catch (const std::exception& e) {
      throw ObjectiveFailure(std::vector<double>(w.data(), w.data() + w.size()), e.what());
    }
    if (!std::isfinite(score)) {
      throw ObjectiveFailure(std::vector<double>(w.data(), w.data() + w.size()),
                             "objective returned a non-finite score");
    }
    if (score > result.best_score) {
      result.best_score = score;
      result.best_weights = w;
    }
    return score;
  };

  // Singleton feasible set: nothing to search.
  if (region.free_dims() == 0) {
    Eigen::VectorXd w(1);
    w(0) = region.complete(Eigen::VectorXd(0));
    if (!region.in_box(w) || !region.satisfies_inequalities(w)) {
      throw InfeasibleRegion("completed singleton violates the constraints");
    }
    evaluate_at(w);
    return result;
  }

  const std::vector<Eigen::VectorXd> initial =
      sample_feasible(region, config.m, mix_seed(config.seed, 1), config.sampler);
  Eigen::MatrixXd samples(config.m, region.n);
  for (int i = 0; i < config.m; ++i) samples.row(i) = initial[static_cast<std::size_t>(i)];

  for (int level = 0; level < config.max_levels; ++level) {
    const int survivors = static_cast<int>(samples.rows());
    const int k = clusters_for(config, survivors);
    const double best_before = result.best_score;

    const KMeansResult clustering = kmeans(samples, k, mix_seed(config.seed, 0x1000 + level),
                                           config.kmeans_max_iter, config.kmeans_tol);

    int winner = -1;
    double winner_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const std::vector<int> members = cluster_members(clustering, c);
      if (members.empty()) continue;
      const Eigen::VectorXd w =
          repair_center(region, config, clustering.centers.row(c), samples, members);
      const double score = evaluate_at(w);
      if (score > winner_score) {  // strict: ties resolve to the lowest index
        winner_score = score;
        winner = c;
      }
    }

    const std::vector<int> members = cluster_members(clustering, winner);
    const double diameter = cluster_diameter(clustering, samples, winner);
    result.trace.push_back(
        {level, survivors, winner, winner_score, diameter, result.best_score});

    Eigen::MatrixXd next(static_cast<int>(members.size()), region.n);
    for (std::size_t i = 0; i < members.size(); ++i) {
      next.row(static_cast<Eigen::Index>(i)) = samples.row(members[i]);
    }
    samples.swap(next);

    if (diameter < config.diameter_tol) break;
    if (level >= 1 && result.best_score - best_before < config.improvement_tol) break;

    const int floor = k * config.replenish_floor;
    if (static_cast<int>(samples.rows()) < floor) {
      Rng rng(mix_seed(config.seed, 0x2000 + level));
      replenish(region, samples, floor, rng);
    }
  }

  // Final sweep over the surviving cluster's raw samples; the answer is the
  // best point ever evaluated, not the last center.
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    evaluate_at(samples.row(i).transpose());
  }
  return result;
}

}  // namespace clustermc
