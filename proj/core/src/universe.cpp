#include "clustermc/universe.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "clustermc/errors.hpp"
#include "clustermc/kmeans.hpp"
#include "clustermc/rng.hpp"

namespace clustermc {

int UniversePartition::asset_count() const {
  int total = 0;
  for (const auto& g : groups) total += static_cast<int>(g.size());
  return total;
}

void UniversePartition::validate(int n) const {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& group : groups) {
    if (group.empty()) {
      throw DimensionMismatch("partition contains an empty group");
    }
    for (int j : group) {
      if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)]) {
        throw DimensionMismatch("partition is not a disjoint cover");
      }
      seen[static_cast<std::size_t>(j)] = true;
    }
  }
  if (asset_count() != n) {
    throw DimensionMismatch("partition does not cover all assets");
  }
}

namespace {

// Cross-sectionally z-scored factor rows at one date; constant factors are
// dropped. Returns one row per surviving factor.
Eigen::MatrixXd standardized_cross_section(const FactorPanel& factors, int date_index) {
  if (factors.factors() == 0) {
    throw DegenerateFactor("no factors supplied");
  }
  const Eigen::Index n = factors.values.front().cols();
  if (date_index < 0 || date_index >= factors.values.front().rows()) {
    throw DimensionMismatch("date index outside factor panel");
  }
  std::vector<Eigen::RowVectorXd> rows;
  for (int k = 0; k < factors.factors(); ++k) {
    Eigen::RowVectorXd x = factors.values[static_cast<std::size_t>(k)].row(date_index);
    const double mean = x.mean();
    const double sd = std::sqrt((x.array() - mean).square().mean());
    if (sd == 0.0) {
      std::cerr << "warning: factor '" << factors.names[static_cast<std::size_t>(k)]
                << "' is cross-sectionally constant at date index " << date_index
                << "; dropped\n";
      continue;
    }
    rows.push_back((x.array() - mean) / sd);
  }
  if (rows.empty()) {
    throw DegenerateFactor("every factor is cross-sectionally constant");
  }
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t k = 0; k < rows.size(); ++k) z.row(static_cast<Eigen::Index>(k)) = rows[k];
  return z;
}

}  // namespace

UniversePartition partition_by_score(const FactorPanel& factors, int date_index, int buckets) {
  if (buckets < 1) {
    throw DimensionMismatch("bucket count must be >= 1");
  }
  const Eigen::MatrixXd z = standardized_cross_section(factors, date_index);
  const int n = static_cast<int>(z.cols());
  const Eigen::RowVectorXd score = z.colwise().mean();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score(a) > score(b); });

  const int groups = std::min(buckets, n);
  UniversePartition partition;
  partition.method = "score";
  partition.groups.resize(static_cast<std::size_t>(groups));
  const int base = n / groups;
  const int remainder = n % groups;
  int cursor = 0;
  for (int g = 0; g < groups; ++g) {
    const int size = base + (g < remainder ? 1 : 0);
    for (int i = 0; i < size; ++i) {
      partition.groups[static_cast<std::size_t>(g)].push_back(order[static_cast<std::size_t>(cursor++)]);
    }
  }
  partition.validate(n);
  return partition;
}

UniversePartition partition_by_kmeans(const FactorPanel& factors, int date_index, int k,
                                      std::uint64_t seed) {
  const Eigen::MatrixXd z = standardized_cross_section(factors, date_index);
  const int n = static_cast<int>(z.cols());
  const KMeansResult clustering = kmeans(z.transpose(), k, seed);

  UniversePartition partition;
  partition.method = "kmeans";
  for (int c = 0; c < k; ++c) {
    std::vector<int> members = cluster_members(clustering, c);
    if (!members.empty()) partition.groups.push_back(std::move(members));
  }
  partition.validate(n);
  return partition;
}

Eigen::VectorXd compose_weights(const UniversePartition& partition,
                                const std::vector<Eigen::VectorXd>& within,
                                const Eigen::VectorXd& across, int n) {
  if (within.size() != partition.groups.size() ||
      across.size() != static_cast<Eigen::Index>(partition.groups.size())) {
    throw DimensionMismatch("stage weights do not match partition");
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (std::size_t g = 0; g < partition.groups.size(); ++g) {
    const auto& group = partition.groups[g];
    if (within[g].size() != static_cast<Eigen::Index>(group.size())) {
      throw DimensionMismatch("within-group weights do not match group size");
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      w(group[i]) = across(static_cast<Eigen::Index>(g)) * within[g](static_cast<Eigen::Index>(i));
    }
  }
  return w;
}

BottomUpResult optimize_bottom_up(const ReturnPanel& panel, const UniversePartition& partition,
                                  const BoxTemplate& box, const ObjectiveSpec& objective,
                                  const OptimizerConfig& config) {
  const int n = panel.width();
  partition.validate(n);

  auto objective_for = [&](const ReturnPanel& sub, const ObjectiveSpec& spec) {
    return [&sub, spec](const Eigen::VectorXd& w) { return evaluate(spec, sub, w); };
  };

  // Degenerate hierarchy: identical to direct optimization, same seed.
  if (partition.groups.size() == 1) {
    const FeasibleRegion region = budget_region(n, box.lower, box.upper);
    const OptimizationResult direct = optimize(region, objective_for(panel, objective), config);
    return {direct.best_weights, direct.evaluations};
  }

  const int n_groups = static_cast<int>(partition.groups.size());
  std::vector<Eigen::VectorXd> within(static_cast<std::size_t>(n_groups));
  std::int64_t evaluations = 0;

  Eigen::MatrixXd synthetic(panel.periods(), n_groups);
  Eigen::VectorXd synthetic_mu(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    const auto& group = partition.groups[static_cast<std::size_t>(g)];
    const ReturnPanel sub = panel.select_assets(group);

    ObjectiveSpec group_spec = objective;
    if (objective.forecast_mu) {
      Eigen::VectorXd mu(group.size());
      for (std::size_t i = 0; i < group.size(); ++i) {
        mu(static_cast<Eigen::Index>(i)) = (*objective.forecast_mu)(group[i]);
      }
      group_spec.forecast_mu = mu;
    }

    OptimizerConfig group_config = config;
    group_config.seed = mix_seed(config.seed, 0x100 + static_cast<std::uint64_t>(g));
    const FeasibleRegion region =
        budget_region(static_cast<int>(group.size()), box.lower, box.upper);
    const OptimizationResult stage1 = optimize(region, objective_for(sub, group_spec), group_config);

    within[static_cast<std::size_t>(g)] = stage1.best_weights;
    evaluations += stage1.evaluations;
    synthetic.col(g) = sub.returns * stage1.best_weights;
    if (group_spec.forecast_mu) {
      synthetic_mu(g) = group_spec.forecast_mu->dot(stage1.best_weights);
    }
  }

  ReturnPanel across_panel;
  across_panel.returns = synthetic;
  across_panel.dates = panel.dates;
  across_panel.assets.reserve(static_cast<std::size_t>(n_groups));
  for (int g = 0; g < n_groups; ++g) across_panel.assets.push_back("group_" + std::to_string(g));

  ObjectiveSpec across_spec = objective;
  if (objective.forecast_mu) across_spec.forecast_mu = synthetic_mu;

  OptimizerConfig across_config = config;
  across_config.seed = mix_seed(config.seed, 0x200);
  const FeasibleRegion across_region = budget_region(n_groups, box.lower, box.upper);
  const OptimizationResult stage2 =
      optimize(across_region, objective_for(across_panel, across_spec), across_config);
  evaluations += stage2.evaluations;

  return {compose_weights(partition, within, stage2.best_weights, n), evaluations};
}

}  // namespace clustermc
