#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "clustermc/objectives.hpp"
#include "clustermc/optimizer.hpp"
#include "clustermc/panel.hpp"

namespace clustermc {

// Disjoint cover of the asset indices 0..n-1.
struct UniversePartition {
  std::vector<std::vector<int>> groups;
  std::string method;

  int asset_count() const;
  void validate(int n) const;
};

// Box bounds reused for every group and for the across-group stage.
struct BoxTemplate {
  double lower = 0.0;
  double upper = 1.0;
};

// Rank assets by the equal-weighted mean of cross-sectionally z-scored factor
// values at `date_index` and split into `buckets` contiguous near-equal
// groups, highest scores first (remainder goes to the top groups).
// Cross-sectionally constant factors are dropped with a stderr warning;
// DegenerateFactor only if every factor is constant.
UniversePartition partition_by_score(const FactorPanel& factors, int date_index, int buckets);

// k-means over the standardized factor cross-section at `date_index`.
UniversePartition partition_by_kmeans(const FactorPanel& factors, int date_index, int k,
                                      std::uint64_t seed);

// final weight of asset j in group g = across[g] * within_g[j]
Eigen::VectorXd compose_weights(const UniversePartition& partition,
                                const std::vector<Eigen::VectorXd>& within,
                                const Eigen::VectorXd& across, int n);

struct BottomUpResult {
  Eigen::VectorXd weights;
  std::int64_t evaluations = 0;
};

// Two-level bottom-up optimization: optimize within each group, form one
// synthetic asset per group from the stage-1 weights, optimize across the
// synthetic assets, and multiply through. A single-group partition degrades
// to direct optimization with the caller's seed.
BottomUpResult optimize_bottom_up(const ReturnPanel& panel, const UniversePartition& partition,
                                  const BoxTemplate& box, const ObjectiveSpec& objective,
                                  const OptimizerConfig& config);

}  // namespace clustermc
